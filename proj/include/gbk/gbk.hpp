#pragma once

#include "gbk/error.hpp"
#include "gbk/linalg.hpp"
#include "gbk/multivector.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/sampling.hpp"
#include "gbk/differential.hpp"
#include "gbk/region.hpp"
#include "gbk/graph.hpp"
#include "gbk/cones.hpp"
#include "gbk/registry.hpp"
#include "gbk/expression.hpp"
#include "gbk/io.hpp"
