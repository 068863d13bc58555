#pragma once

#include "gcl/bench.hpp"
#include "gcl/domains.hpp"
#include "gcl/edit_distance.hpp"
#include "gcl/grammar.hpp"
#include "gcl/grammar_io.hpp"
#include "gcl/nfa.hpp"
#include "gcl/propagators.hpp"
#include "gcl/solver.hpp"
#include "gcl/transforms.hpp"
