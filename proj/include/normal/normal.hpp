#pragma once

#include "normal/certified.hpp"
#include "normal/constants.hpp"
#include "normal/equidist.hpp"
#include "normal/errors.hpp"
#include "normal/exact.hpp"
#include "normal/interval_set.hpp"
#include "normal/json_io.hpp"
#include "normal/plan.hpp"
#include "normal/schedule.hpp"
#include "normal/schmidt.hpp"
#include "normal/sierpinski.hpp"
