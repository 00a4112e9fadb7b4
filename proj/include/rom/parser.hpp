#pragma once

#include "rom/ast.hpp"
#include "rom/diagnostics.hpp"
#include "rom/lexer.hpp"

#include <vector>

namespace rom {

/// Parses one token stream. Errors are reported as E-PARSE; the parser skips to
/// the next top-level declaration and continues, so several errors can be
/// reported per file.
ProgramAst parse(const std::vector<Token>& tokens, DiagnosticSink& diags);

/// Tokenizes and parses each file in order, concatenating the declarations.
ProgramAst parseFiles(const SourceManager& sm, const std::vector<int>& files,
                      DiagnosticSink& diags);

/// Canonical rendering: explicit access labels, fully parenthesized
/// expressions. Reparsing yields a structurally identical tree.
std::string pretty_print(const ProgramAst& ast);

}  // namespace rom
