#include "rom/checker.hpp"
#include "rom/dump.hpp"
#include "rom/parser.hpp"
#include "rom/runtime.hpp"

#include <CLI11.hpp>
#include <unistd.h>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kUsage = 64;

struct Options {
    std::string diag = "human";
    bool openWorld = false;
    std::string dump;
    bool subtypes = false;
    std::vector<std::string> files;
};

void addCommon(CLI::App* cmd, Options& o) {
    cmd->add_option("--diag", o.diag, "diagnostic format")->check(CLI::IsMember({"human", "json"}));
    cmd->add_flag("--open-world", o.openWorld, "report incomplete multimethods as warnings");
    cmd->add_option("files", o.files, "source files")->required()->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rom checker and interpreter"};
    app.require_subcommand(1);
    Options o;
    auto* check = app.add_subcommand("check", "check a program");
    auto* run = app.add_subcommand("run", "check and run a program");
    auto* dump = app.add_subcommand("dump", "print checker tables");
    addCommon(check, o);
    addCommon(run, o);
    addCommon(dump, o);
    dump->add_option("--dump", o.dump, "what to print")
        ->check(CLI::IsMember({"types", "flattened", "dispatch", "subtypes"}));
    dump->add_flag("--subtypes", o.subtypes, "same as --dump=subtypes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (dump->parsed()) {
        if (o.subtypes) o.dump = "subtypes";
        if (o.dump.empty()) {
            std::cerr << "romc dump: one of --dump=types|flattened|dispatch|subtypes is required\n";
            return kUsage;
        }
    }

    rom::SourceManager sm;
    std::vector<int> ids;
    try {
        for (const auto& f : o.files) ids.push_back(sm.load(f));
    } catch (const std::exception& e) {
        std::cerr << "romc: " << e.what() << "\n";
        return kUsage;
    }

    rom::DiagnosticSink diags;
    auto ast = rom::parseFiles(sm, ids, diags);
    std::unique_ptr<rom::Program> prog;
    if (!diags.hasErrors()) {
        rom::CheckOptions copts;
        copts.openWorld = o.openWorld;
        prog = rom::check_program(ast, diags, copts);
    } else {
        diags.finalize();
    }

    const auto fmt = o.diag == "json" ? rom::DiagFormat::Json : rom::DiagFormat::Human;
    const auto mode = rom::colorModeFromEnv();
    const bool color = fmt == rom::DiagFormat::Human &&
                       (mode == rom::ColorMode::Always || (mode == rom::ColorMode::Auto && isatty(2)));
    std::cerr << rom::formatAll(diags, sm, fmt, color);
    if (diags.hasErrors()) return 1;

    if (dump->parsed()) {
        if (o.dump == "types") std::cout << rom::dump_types(*prog);
        if (o.dump == "flattened") std::cout << rom::dump_flattened(*prog);
        if (o.dump == "dispatch") std::cout << rom::dump_dispatch(*prog);
        if (o.dump == "subtypes") std::cout << rom::dump_subtypes(*prog);
        return 0;
    }
    if (run->parsed()) {
        auto r = rom::run_program(*prog, std::cout);
        std::cout.flush();
        if (!r.ok) {
            std::cerr << rom::formatRuntimeError(r.error, sm) << "\n";
            return 2;
        }
    }
    return 0;
}
