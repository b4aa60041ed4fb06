// Umbrella header.
#pragma once

#include "heislab/abelian.hpp"
#include "heislab/action.hpp"
#include "heislab/heisenberg.hpp"
#include "heislab/intertwiner.hpp"
#include "heislab/numerics.hpp"
#include "heislab/peter_weyl.hpp"
#include "heislab/product.hpp"
#include "heislab/rep_io.hpp"
#include "heislab/report.hpp"
#include "heislab/weyl.hpp"
