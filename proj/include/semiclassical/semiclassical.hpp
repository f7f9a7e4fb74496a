#pragma once

#include "classical.hpp"
#include "compare.hpp"
#include "config.hpp"
#include "error.hpp"
#include "fgh.hpp"
#include "kinetics.hpp"
#include "numerics.hpp"
#include "pipeline.hpp"
#include "potentials.hpp"
#include "wkbj.hpp"
