#pragma once

// Umbrella header.

#include "perfrepair/error.hpp"
#include "perfrepair/exec/classify.hpp"
#include "perfrepair/exec/instrument.hpp"
#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/exec/testcase.hpp"
#include "perfrepair/harness/analysis.hpp"
#include "perfrepair/harness/commands.hpp"
#include "perfrepair/harness/config.hpp"
#include "perfrepair/harness/report.hpp"
#include "perfrepair/harness/suite.hpp"
#include "perfrepair/invariants/generator.hpp"
#include "perfrepair/invariants/implies.hpp"
#include "perfrepair/invariants/infer.hpp"
#include "perfrepair/invariants/invariant.hpp"
#include "perfrepair/invariants/refine.hpp"
#include "perfrepair/invariants/report.hpp"
#include "perfrepair/invariants/spec.hpp"
#include "perfrepair/invariants/summary.hpp"
#include "perfrepair/lang/ast.hpp"
#include "perfrepair/lang/check.hpp"
#include "perfrepair/lang/parser.hpp"
#include "perfrepair/lang/printer.hpp"
#include "perfrepair/parallel.hpp"
#include "perfrepair/repair/diff.hpp"
#include "perfrepair/repair/localize.hpp"
#include "perfrepair/repair/mutation.hpp"
#include "perfrepair/repair/search.hpp"
#include "perfrepair/validate/check.hpp"
#include "perfrepair/validate/compare.hpp"
#include "perfrepair/validate/pipeline.hpp"
