#pragma once

#include "secretary/advice_model.hpp"
#include "secretary/binary_analytics.hpp"
#include "secretary/builders.hpp"
#include "secretary/exact_lp.hpp"
#include "secretary/greedy_dual.hpp"
#include "secretary/model_spec.hpp"
#include "secretary/monte_carlo.hpp"
#include "secretary/numeric.hpp"
#include "secretary/policy.hpp"
#include "secretary/samples_analytics.hpp"
