#pragma once

#include "eigenfactor/errors.hpp"
#include "eigenfactor/bigcomplex.hpp"
#include "eigenfactor/numberfield.hpp"
#include "eigenfactor/qseries.hpp"
#include "eigenfactor/forms.hpp"
#include "eigenfactor/reduction.hpp"
