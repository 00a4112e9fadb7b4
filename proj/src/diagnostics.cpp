#include "rom/diagnostics.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

namespace rom {

void DiagnosticSink::error(std::string code, SourceLoc loc, std::string message) {
    add({std::move(code), Severity::Error, loc, std::move(message), {}});
}

void DiagnosticSink::warning(std::string code, SourceLoc loc, std::string message) {
    add({std::move(code), Severity::Warning, loc, std::move(message), {}});
}

void DiagnosticSink::add(Diagnostic d) { diags_.push_back(std::move(d)); }

void DiagnosticSink::finalize() {
    auto key = [](const Diagnostic& d) {
        return std::tie(d.loc.file, d.loc.line, d.loc.col, d.code, d.message);
    };
    std::stable_sort(diags_.begin(), diags_.end(),
                     [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
    diags_.erase(std::unique(diags_.begin(), diags_.end(),
                             [&](const Diagnostic& a, const Diagnostic& b) {
                                 return key(a) == key(b);
                             }),
                 diags_.end());
}

bool DiagnosticSink::hasErrors() const { return errorCount() > 0; }

size_t DiagnosticSink::errorCount() const {
    return static_cast<size_t>(std::count_if(diags_.begin(), diags_.end(), [](const Diagnostic& d) {
        return d.severity == Severity::Error;
    }));
}

void DiagnosticSink::downgrade(const std::string& code) {
    for (auto& d : diags_)
        if (d.code == code) d.severity = Severity::Warning;
}

std::string formatDiagnostic(const Diagnostic& d, const SourceManager& sm, DiagFormat fmt,
                             bool color) {
    const bool warn = d.severity == Severity::Warning;
    if (fmt == DiagFormat::Json) {
        nlohmann::ordered_json j;
        j["code"] = d.code;
        j["severity"] = warn ? "warning" : "error";
        j["file"] = std::string(sm.path(d.loc.file));
        j["line"] = d.loc.line;
        j["col"] = d.loc.col;
        j["message"] = d.message;
        return j.dump();
    }
    std::string code = d.code;
    if (color) code = fmt::format("\x1b[1;{}m{}\x1b[0m", warn ? 33 : 31, d.code);
    return fmt::format("{}:{}:{}: {}{}: {}", sm.path(d.loc.file), d.loc.line, d.loc.col,
                       warn ? "warning " : "", code, d.message);
}

std::string formatAll(const DiagnosticSink& sink, const SourceManager& sm, DiagFormat fmt,
                      bool color) {
    std::string out;
    for (const auto& d : sink.all()) {
        out += formatDiagnostic(d, sm, fmt, color);
        out += '\n';
    }
    return out;
}

std::string shortForm(const DiagnosticSink& sink) {
    std::string out;
    for (const auto& d : sink.all()) out += fmt::format("{}:{}: {}\n", d.loc.line, d.loc.col, d.code);
    return out;
}

ColorMode colorModeFromEnv() {
    const char* v = std::getenv("ROMC_COLOR");
    if (!v || std::strcmp(v, "auto") == 0) return ColorMode::Auto;
    if (std::strcmp(v, "always") == 0) return ColorMode::Always;
    return ColorMode::Never;
}

}  // namespace rom
