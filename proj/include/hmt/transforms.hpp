#pragma once

#include "hmt/transforms/cm_average.hpp"
#include "hmt/transforms/digits.hpp"
#include "hmt/transforms/fj.hpp"
#include "hmt/transforms/gp.hpp"
#include "hmt/transforms/linear.hpp"
#include "hmt/transforms/matrices.hpp"
#include "hmt/transforms/me.hpp"
#include "hmt/transforms/output.hpp"
