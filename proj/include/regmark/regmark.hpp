#pragma once

#include "gaussian.hpp"
#include "graph.hpp"
#include "graphoid.hpp"
#include "node_set.hpp"
#include "parse.hpp"
#include "random.hpp"
#include "separation.hpp"
#include "statements.hpp"
