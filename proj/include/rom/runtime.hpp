#pragma once

#include "rom/program.hpp"
#include "rom/source.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rom {

struct RunStats {
    uint64_t calls = 0;
    uint64_t dynamicDispatches = 0;  // overload chosen from run-time classes
    uint64_t staticChecked = 0;      // statically fixed calls re-resolved at run time
    uint64_t staticAgreed = 0;
    uint64_t tablesBuilt = 0;
    uint64_t tableLookups = 0;
};

struct RuntimeError {
    std::string code;  // R-TYPECASE, R-ABSTRACT, R-MM-NONE, R-NULL, R-DIV-ZERO
    std::string message;
    SourceLoc loc;
};

struct RunResult {
    bool ok = true;
    RuntimeError error;
    RunStats stats;
};

/// Runs the top-level statements of a program that checked without errors.
RunResult run_program(const Program& prog, std::ostream& out);

/// `R-CODE: file:line:col: message`
std::string formatRuntimeError(const RuntimeError& e, const SourceManager& sm);

/// Exact-match selection: the overload whose implementation ids at the
/// dispatched positions equal `classes`, or -1.
int select_multimethod(const Family& f, const std::vector<std::string>& classes);

}  // namespace rom
