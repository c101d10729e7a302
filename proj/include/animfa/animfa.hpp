#pragma once

#include "animfa/dynamics.hpp"
#include "animfa/equilibria.hpp"
#include "animfa/geometry.hpp"
#include "animfa/mat2.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"
#include "animfa/rk45.hpp"
#include "animfa/slowfast.hpp"
#include "animfa/stability.hpp"
