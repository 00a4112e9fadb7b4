#pragma once

#include "rom/driver.hpp"

#include <string>
#include <vector>

namespace test {

inline std::unique_ptr<rom::Compilation> compile(const std::string& src, bool openWorld = false) {
    rom::CheckOptions o;
    o.openWorld = openWorld;
    return rom::compile_text("t.rom", src, o);
}

/// Codes of all diagnostics, in report order.
inline std::vector<std::string> codes(const rom::Compilation& c) {
    std::vector<std::string> out;
    for (const auto& d : c.diags.all()) out.push_back(d.code);
    return out;
}

inline bool clean(const std::string& src) { return compile(src)->diags.empty(); }

/// Program output; a run-time error appends `runtime: CODE`, a rejected
/// program yields `rejected` followed by its codes.
inline std::string run(const std::string& src, bool openWorld = false) {
    auto c = compile(src, openWorld);
    if (!c->ok()) {
        std::string s = "rejected";
        for (const auto& code : codes(*c)) s += " " + code;
        return s;
    }
    auto e = rom::execute(*c);
    if (!e.result.ok) e.out += "runtime: " + e.result.error.code + "\n";
    return e.out;
}

}  // namespace test
