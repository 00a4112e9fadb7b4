#pragma once

#include "rom/checker.hpp"
#include "rom/parser.hpp"
#include "rom/runtime.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rom {

/// A parsed and checked program with everything it refers into.
struct Compilation {
    SourceManager sm;
    DiagnosticSink diags;
    ProgramAst ast;
    std::unique_ptr<Program> prog;  // null when parsing failed

    bool ok() const { return prog && !diags.hasErrors(); }
};

std::unique_ptr<Compilation> compile_files(const std::vector<std::string>& paths,
                                           const CheckOptions& opts = {});
std::unique_ptr<Compilation> compile_text(const std::string& name, const std::string& text,
                                          const CheckOptions& opts = {});

struct Execution {
    std::string out;
    RunResult result;
};
Execution execute(const Compilation& c);

// Corpus support. A program `x.rom` has a sidecar `x.expected` whose first line
// is `stdout:` or `diagnostics:`; the rest is compared byte for byte.

struct CorpusCase {
    std::string path;
    std::string mode;      // "stdout" or "diagnostics"
    std::string expected;
    std::string error;     // sidecar problem; non-empty means the case is broken
};

std::vector<std::string> find_corpus_programs(const std::string& dir);
CorpusCase load_corpus_case(const std::string& romPath);
/// What the sidecar body would be for this program under `mode`. A run-time
/// error appends a `runtime: R-...` line.
std::string corpus_actual(const std::string& romPath, const std::string& mode);
std::string line_diff(const std::string& expected, const std::string& actual);

}  // namespace rom
