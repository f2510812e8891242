#pragma once

#include "subexp/analyze.hpp"
#include "subexp/bench.hpp"
#include "subexp/connectivity.hpp"
#include "subexp/digraph.hpp"
#include "subexp/error.hpp"
#include "subexp/generate.hpp"
#include "subexp/iob.hpp"
#include "subexp/kpath.hpp"
#include "subexp/lob.hpp"
#include "subexp/oracle.hpp"
#include "subexp/td_dp.hpp"
#include "subexp/treewidth.hpp"
