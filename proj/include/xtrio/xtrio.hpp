#pragma once

#include "xtrio/bmc.hpp"
#include "xtrio/check.hpp"
#include "xtrio/derived.hpp"
#include "xtrio/dimacs.hpp"
#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/formula_io.hpp"
#include "xtrio/gadgets.hpp"
#include "xtrio/ltl.hpp"
#include "xtrio/ltl_eval.hpp"
#include "xtrio/nstime.hpp"
#include "xtrio/oracle.hpp"
#include "xtrio/sat.hpp"
#include "xtrio/stateflow.hpp"
#include "xtrio/structure.hpp"
#include "xtrio/translate.hpp"
