#pragma once

#include "cwmr/codec.hpp"
#include "cwmr/errors.hpp"
#include "cwmr/filters.hpp"
#include "cwmr/grid.hpp"
#include "cwmr/harness.hpp"
#include "cwmr/image.hpp"
#include "cwmr/mra.hpp"
#include "cwmr/polynomial.hpp"
#include "cwmr/predictor.hpp"
#include "cwmr/smoothness.hpp"
