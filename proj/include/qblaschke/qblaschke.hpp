#pragma once

#include "error.hpp"
#include "quaternion.hpp"
#include "polynomial.hpp"
#include "series.hpp"
#include "qmatrix.hpp"
#include "blaschke.hpp"
#include "zeros.hpp"
#include "toeplitz.hpp"
#include "realization.hpp"
#include "synthesis.hpp"
#include "schur.hpp"
