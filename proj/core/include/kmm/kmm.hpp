#pragma once

#include "kmm/combinatorics.hpp"
#include "kmm/error.hpp"
#include "kmm/estimator.hpp"
#include "kmm/histogram.hpp"
#include "kmm/matrix.hpp"
#include "kmm/oracle.hpp"
#include "kmm/sequences.hpp"
#include "kmm/statistics.hpp"
