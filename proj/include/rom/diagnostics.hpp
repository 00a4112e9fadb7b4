#pragma once

#include "rom/source.hpp"

#include <string>
#include <vector>

namespace rom {

enum class Severity { Error, Warning };

struct Diagnostic {
    std::string code;  // stable catalog identifier, e.g. "E-CONFORM"
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string message;
    std::vector<SourceLoc> related;
};

enum class DiagFormat { Human, Json };
enum class ColorMode { Auto, Always, Never };

class DiagnosticSink {
public:
    void error(std::string code, SourceLoc loc, std::string message);
    void warning(std::string code, SourceLoc loc, std::string message);
    void add(Diagnostic d);

    /// Sorts by (file, line, col, code, message) and drops exact duplicates.
    /// Inherited method bodies are checked once per copy, which can report the
    /// same problem at the same source location more than once.
    void finalize();

    const std::vector<Diagnostic>& all() const { return diags_; }
    bool hasErrors() const;
    size_t errorCount() const;
    bool empty() const { return diags_.empty(); }

    /// Every diagnostic with `code` becomes a warning (used by --open-world).
    void downgrade(const std::string& code);

private:
    std::vector<Diagnostic> diags_;
};

std::string formatDiagnostic(const Diagnostic& d, const SourceManager& sm, DiagFormat fmt,
                             bool color = false);
std::string formatAll(const DiagnosticSink& sink, const SourceManager& sm, DiagFormat fmt,
                      bool color = false);

/// `line:col: code` per diagnostic; the body of a corpus `diagnostics:` sidecar.
std::string shortForm(const DiagnosticSink& sink);

ColorMode colorModeFromEnv();

}  // namespace rom
