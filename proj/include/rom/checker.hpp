#pragma once

#include "rom/ast.hpp"
#include "rom/diagnostics.hpp"
#include "rom/program.hpp"

#include <memory>

namespace rom {

struct CheckOptions {
    bool openWorld = false;  // E-MM-INCOMPLETE becomes a warning
};

/// Elaborates and checks a whole program. The returned program refers into
/// `ast`, which must outlive it. Diagnostics are appended to `diags`; the
/// program is runnable only when no errors were reported.
std::unique_ptr<Program> check_program(const ProgramAst& ast, DiagnosticSink& diags,
                                       const CheckOptions& opts = {});

}  // namespace rom
