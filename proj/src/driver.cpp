#include "rom/driver.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace rom {

namespace {

std::unique_ptr<Compilation> finish(std::unique_ptr<Compilation> c, const std::vector<int>& ids,
                                    const CheckOptions& opts) {
    c->ast = parseFiles(c->sm, ids, c->diags);
    if (c->diags.hasErrors()) {
        c->diags.finalize();
        return c;
    }
    c->prog = check_program(c->ast, c->diags, opts);
    return c;
}

std::vector<std::string> splitLines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

std::unique_ptr<Compilation> compile_files(const std::vector<std::string>& paths,
                                           const CheckOptions& opts) {
    auto c = std::make_unique<Compilation>();
    std::vector<int> ids;
    for (const auto& p : paths) ids.push_back(c->sm.load(p));
    return finish(std::move(c), ids, opts);
}

std::unique_ptr<Compilation> compile_text(const std::string& name, const std::string& text,
                                          const CheckOptions& opts) {
    auto c = std::make_unique<Compilation>();
    int id = c->sm.add(name, text);
    return finish(std::move(c), {id}, opts);
}

Execution execute(const Compilation& c) {
    std::ostringstream out;
    Execution e;
    e.result = run_program(*c.prog, out);
    e.out = out.str();
    return e;
}

std::vector<std::string> find_corpus_programs(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".rom")
            out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

CorpusCase load_corpus_case(const std::string& romPath) {
    CorpusCase c;
    c.path = romPath;
    fs::path sidecar = fs::path(romPath).replace_extension(".expected");
    std::ifstream in(sidecar, std::ios::binary);
    if (!in) {
        c.error = "missing sidecar " + sidecar.string();
        return c;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    size_t nl = text.find('\n');
    std::string head = text.substr(0, nl);
    if (head == "stdout:") c.mode = "stdout";
    else if (head == "diagnostics:") c.mode = "diagnostics";
    else {
        c.error = "sidecar " + sidecar.string() + " must start with 'stdout:' or 'diagnostics:'";
        return c;
    }
    c.expected = nl == std::string::npos ? "" : text.substr(nl + 1);
    return c;
}

std::string corpus_actual(const std::string& romPath, const std::string& mode) {
    auto c = compile_files({romPath});
    std::string out;
    if (mode == "diagnostics") out = shortForm(c->diags);
    if (!c->ok()) {
        if (mode == "stdout") out = shortForm(c->diags);
        return out;
    }
    Execution e = execute(*c);
    if (mode == "stdout") out = e.out;
    if (!e.result.ok) out += "runtime: " + e.result.error.code + "\n";
    return out;
}

std::string line_diff(const std::string& expected, const std::string& actual) {
    auto a = splitLines(expected), b = splitLines(actual);
    const size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (size_t i = n; i-- > 0;)
        for (size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    std::string out;
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && a[i] == b[j]) {
            out += "  " + a[i] + "\n";
            ++i, ++j;
        } else if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
            out += "+ " + b[j++] + "\n";
        } else {
            out += "- " + a[i++] + "\n";
        }
    }
    return out;
}

}  // namespace rom
