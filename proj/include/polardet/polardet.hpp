#pragma once

#include "polardet/codec.hpp"
#include "polardet/dataio.hpp"
#include "polardet/error.hpp"
#include "polardet/eval.hpp"
#include "polardet/experiments.hpp"
#include "polardet/geometry.hpp"
#include "polardet/grid.hpp"
#include "polardet/losses.hpp"
#include "polardet/parallel.hpp"
#include "polardet/postprocess.hpp"
#include "polardet/targets.hpp"
