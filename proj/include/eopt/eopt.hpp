#pragma once

#include "eopt/design.hpp"
#include "eopt/errors.hpp"
#include "eopt/gram_schmidt.hpp"
#include "eopt/linalg.hpp"
#include "eopt/polynomial.hpp"
#include "eopt/quadrature.hpp"
#include "eopt/report.hpp"
#include "eopt/rng.hpp"
#include "eopt/tcheb.hpp"
#include "eopt/weight.hpp"
