#include "rom/driver.hpp"
#include "rom/runtime.hpp"
#include "rom/typesys.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace rom;
namespace fs = std::filesystem;

namespace {

const std::string kCorpus = ROM_CORPUS_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

int lineContaining(const std::string& text, const std::string& needle) {
    auto ls = lines(text);
    for (size_t i = 0; i < ls.size(); ++i)
        if (ls[i].find(needle) != std::string::npos) return static_cast<int>(i) + 1;
    return -1;
}

struct RunOut {
    bool checked = false;
    std::string out;
    RunResult result;
};

RunOut runFile(const std::string& path) {
    RunOut r;
    auto c = compile_files({path});
    if (!c->ok()) return r;
    r.checked = true;
    Execution e = execute(*c);
    r.out = e.out;
    r.result = e.result;
    return r;
}

RunOut runText(const std::string& text, const CheckOptions& opts = {}) {
    RunOut r;
    auto c = compile_text("gen.rom", text, opts);
    if (!c->ok()) return r;
    r.checked = true;
    Execution e = execute(*c);
    r.out = e.out;
    r.result = e.result;
    return r;
}

// 1 ------------------------------------------------------------------------

Outcome paperAnnotations() {
    std::vector<std::string> fails;
    auto expectLines = [&](const std::string& name, const std::vector<std::string>& want) {
        RunOut r = runFile(kCorpus + "/" + name);
        auto got = lines(r.out);
        bool ok = r.checked && r.result.ok && got.size() >= want.size() &&
                  std::equal(want.begin(), want.end(), got.begin());
        if (!ok) fails.push_back(name);
    };
    expectLines("counter.rom", {"101"});
    expectLines("funcounter.rom", {"100", "101"});
    expectLines("mm_exact.rom", {"1"});

    {
        std::string path = kCorpus + "/colorpoint_broken.rom";
        auto c = compile_files({path});
        int line = lineContaining(readFile(path), "p.equal(q.closer(p))");
        const auto& ds = c->diags.all();
        bool ok = ds.size() == 1 && ds[0].code == "E-TYPE" && ds[0].loc.line == line;
        if (!ok) fails.push_back("colorpoint_broken.rom");
    }
    {
        auto c = compile_files({kCorpus + "/colorpoint_selftype.rom"});
        if (!c->diags.empty()) fails.push_back("colorpoint_selftype.rom");
    }
    {
        std::string path = kCorpus + "/mm_default_illegal.rom";
        auto c = compile_files({path});
        int line = lineContaining(readFile(path), "// illegal");
        bool ok = line > 0 && c->diags.hasErrors();
        for (const auto& d : c->diags.all())
            if (d.severity == Severity::Error && !(d.code == "E-MM-DEFAULT" && d.loc.line == line))
                ok = false;
        if (!ok) fails.push_back("mm_default_illegal.rom");
    }
    if (fails.empty()) return {true, "6 annotated listings reproduced"};
    std::string s;
    for (const auto& f : fails) s += (s.empty() ? "" : ", ") + f;
    return {false, "mismatch in " + s};
}

// 2 ------------------------------------------------------------------------
// Signatures are symbolic: each type token is a primitive, a declaration name
// or "self". The oracle computes the greatest fixpoint of conformance and
// interface subtyping by brute-force elimination over all pairs.

struct Sig {
    std::string name;
    std::vector<std::string> params;
    std::string ret;
};

struct Decl {
    std::string name;
    bool isInterface = false;
    std::vector<Sig> sigs;
};

struct Oracle {
    const std::vector<Decl>& decls;
    std::map<std::pair<std::string, std::string>, bool> rel;  // (X, I) conform or subtype

    explicit Oracle(const std::vector<Decl>& d) : decls(d) {}

    bool isIface(const std::string& t) const {
        for (const auto& d : decls)
            if (d.name == t) return d.isInterface;
        return false;
    }
    bool isClass(const std::string& t) const {
        for (const auto& d : decls)
            if (d.name == t) return !d.isInterface;
        return false;
    }
    bool holds(const std::string& x, const std::string& i) const {
        if (x == i) return true;
        return rel.at({x, i});
    }
    bool equiv(const std::string& a, const std::string& b) const {
        return a == b || (isIface(a) && isIface(b) && holds(a, b) && holds(b, a));
    }
    bool paramOk(const std::string& p, const std::string& r, const std::string& x) const {
        if (r == "self") return p == "self" || p == x;
        if (p == "self") return false;
        return equiv(p, r);
    }
    bool retOk(const std::string& p, const std::string& r, const std::string& x,
               const std::string& iface) const {
        if (r == "self") return p == "self" || p == x || (isClass(p) && holds(p, iface));
        if (p == "self") return isIface(x) && isIface(r) && holds(x, r);
        if (equiv(p, r)) return true;
        return isClass(p) && isIface(r) && holds(p, r);
    }
    bool provides(const Decl& x, const Sig& req, const std::string& iface) const {
        for (const auto& p : x.sigs) {
            if (p.name != req.name || p.params.size() != req.params.size()) continue;
            bool ok = true;
            for (size_t k = 0; k < p.params.size(); ++k)
                if (!paramOk(p.params[k], req.params[k], x.name)) ok = false;
            if (ok && retOk(p.ret, req.ret, x.name, iface)) return true;
        }
        return false;
    }
    void solve() {
        for (const auto& x : decls)
            for (const auto& i : decls)
                if (i.isInterface && x.name != i.name) rel[{x.name, i.name}] = true;
        for (bool changed = true; changed;) {
            changed = false;
            for (auto& [key, v] : rel) {
                if (!v) continue;
                const Decl* x = nullptr;
                const Decl* i = nullptr;
                for (const auto& d : decls) {
                    if (d.name == key.first) x = &d;
                    if (d.name == key.second) i = &d;
                }
                for (const auto& req : i->sigs)
                    if (!provides(*x, req, i->name)) {
                        v = false;
                        changed = true;
                        break;
                    }
            }
        }
    }
};

std::string romType(const std::string& t) {
    if (t == "self") return "selftype &";
    if (t == "int" || t == "double" || t == "bool" || t == "string" || t == "void") return t;
    return t + " &";
}

std::string returnStmt(const std::string& t, const Oracle& o) {
    if (t == "void") return "";
    if (t == "int") return "return 0;";
    if (t == "double") return "return 0.5;";
    if (t == "bool") return "return true;";
    if (t == "string") return "return \"\";";
    if (o.isClass(t)) return "return new " + t + ";";
    return "return g" + t + ";";
}

std::string render(const std::vector<Decl>& decls, const Oracle& o) {
    std::string s;
    for (const auto& d : decls)
        if (d.isInterface) s += fmt::format("{} & g{};\n", d.name, d.name);
    for (const auto& d : decls) {
        if (d.isInterface) {
            s += "interface " + d.name + " {\n";
            for (const auto& m : d.sigs) {
                std::string ps;
                for (size_t k = 0; k < m.params.size(); ++k)
                    ps += (k ? ", " : "") + romType(m.params[k]);
                s += fmt::format("    {} {}({});\n", romType(m.ret), m.name, ps);
            }
        } else {
            s += "class " + d.name + " {\npublic:\n";
            for (const auto& m : d.sigs) {
                std::string ps;
                for (size_t k = 0; k < m.params.size(); ++k)
                    ps += fmt::format("{}{} p{}", k ? ", " : "", romType(m.params[k]), k);
                s += fmt::format("    {} {}({}) {{ {} }}\n", romType(m.ret), m.name, ps,
                                 returnStmt(m.ret, o));
            }
        }
        s += "};\n";
    }
    return s;
}

struct Shape {
    std::vector<std::string> names;
    std::vector<bool> isInterface;
    std::vector<std::vector<Sig>> pools;
};

std::vector<Shape> conformanceShapes() {
    // One interface and two classes whose providers depend on each other.
    Shape a;
    a.names = {"I", "C", "D"};
    a.isInterface = {true, false, false};
    a.pools = {
        {{"h", {}, "void"}, {"g", {"int"}, "int"}, {"mk", {}, "I"}, {"self", {}, "self"},
         {"eq", {"I"}, "bool"}, {"f", {"string", "int"}, "void"}},
        {{"h", {}, "void"}, {"g", {"int"}, "int"}, {"mk", {}, "D"}, {"self", {}, "C"},
         {"eq", {"C"}, "bool"}, {"f", {"string", "int"}, "int"}},
        {{"h", {}, "void"}, {"g", {"double"}, "int"}, {"mk", {}, "C"}, {"self", {}, "C"},
         {"eq", {"I"}, "bool"}, {"f", {"string", "int"}, "void"}},
    };
    // Two interfaces that refer to each other and one class.
    Shape b;
    b.names = {"I", "J", "C"};
    b.isInterface = {true, true, false};
    b.pools = {
        {{"h", {}, "void"}, {"g", {"int"}, "int"}, {"mk", {}, "I"}, {"self", {}, "self"},
         {"eq", {"J"}, "bool"}, {"other", {}, "J"}},
        {{"h", {}, "void"}, {"g", {"int"}, "int"}, {"mk", {}, "J"}, {"self", {}, "self"},
         {"eq", {"I"}, "bool"}, {"g2", {"double"}, "int"}},
        {{"h", {}, "void"}, {"g", {"int"}, "int"}, {"mk", {}, "C"}, {"self", {}, "J"},
         {"eq", {"I"}, "bool"}, {"other", {}, "C"}},
    };
    return {a, b};
}

Outcome conformanceOracle() {
    size_t programs = 0, pairs = 0, agree = 0, unchecked = 0, holding = 0;
    std::string firstBad;
    for (const auto& shape : conformanceShapes()) {
        const size_t n = shape.names.size();
        std::vector<unsigned> mask(n, 0);
        const unsigned limit = 1u << 6;
        for (;;) {
            std::vector<Decl> decls(n);
            for (size_t k = 0; k < n; ++k) {
                decls[k].name = shape.names[k];
                decls[k].isInterface = shape.isInterface[k];
                for (unsigned b = 0; b < 6; ++b)
                    if (mask[k] & (1u << b)) decls[k].sigs.push_back(shape.pools[k][b]);
            }
            Oracle o(decls);
            o.solve();
            auto c = compile_text("conf.rom", render(decls, o));
            ++programs;
            if (!c->ok()) {
                ++unchecked;
                if (firstBad.empty()) firstBad = render(decls, o);
            } else {
                std::set<std::pair<std::string, std::string>> edges(c->prog->subtypeEdges.begin(),
                                                                    c->prog->subtypeEdges.end());
                TypeSystem ts(*c->prog);
                for (const auto& [key, want] : o.rel) {
                    bool got = o.isIface(key.first) ? ts.interfaceSubtype(key.first, key.second)
                                                    : edges.count(key) > 0;
                    ++pairs;
                    if (want) ++holding;
                    if (got == want) {
                        ++agree;
                    } else if (firstBad.empty()) {
                        firstBad = fmt::format("{} vs {}: checker {}, oracle {}\n{}", key.first,
                                               key.second, got, want, render(decls, o));
                    }
                }
            }
            size_t k = 0;
            while (k < n && ++mask[k] == limit) mask[k++] = 0;
            if (k == n) break;
        }
    }
    std::string detail =
        fmt::format("{} programs, {}/{} pairs agree ({} hold), {} not checkable", programs, agree,
                    pairs, holding, unchecked);
    if (!firstBad.empty()) detail += "\nfirst disagreement:\n" + firstBad;
    return {unchecked == 0 && agree == pairs && pairs > 0, detail};
}

// 3 ------------------------------------------------------------------------

Outcome flatteningTwins() {
    const std::vector<std::string> names = {"colorpoint_selftype", "theft_cde", "sharing", "mixin",
                                            "singleton"};
    std::vector<std::string> bad;
    for (const auto& n : names) {
        RunOut orig = runFile(kCorpus + "/" + n + ".rom");
        RunOut twin = runFile(kCorpus + "/twins/" + n + ".rom");
        // the twin must really be flat: no inheritance parts and no import fields
        bool flat = false;
        if (auto c = compile_files({kCorpus + "/twins/" + n + ".rom"}); c->ok()) {
            flat = true;
            for (const auto& [id, d] : c->prog->impls) {
                if (d->parts.size() != 1) flat = false;
                for (const auto& p : d->partitions)
                    for (const auto& f : p.fields)
                        if (!f.importOf.empty()) flat = false;
            }
        }
        bool usesReuse = false;
        if (auto c = compile_files({kCorpus + "/" + n + ".rom"}); c->prog)
            for (const auto& [id, d] : c->prog->impls) {
                if (d->parts.size() > 1) usesReuse = true;
                for (const auto& p : d->partitions)
                    for (const auto& f : p.fields)
                        if (!f.importOf.empty()) usesReuse = true;
            }
        bool ok = orig.checked && twin.checked && orig.result.ok && twin.result.ok &&
                  !orig.out.empty() && orig.out == twin.out && flat && usesReuse;
        if (!ok) bad.push_back(n);
    }
    if (bad.empty()) return {true, "5 programs byte-identical to their flat twins"};
    std::string s;
    for (const auto& b : bad) s += (s.empty() ? "" : ", ") + b;
    return {false, "differs: " + s};
}

// 4 ------------------------------------------------------------------------

struct TreeGen {
    std::mt19937& rng;
    int names = 0;
    std::string node(int depth) {
        std::uniform_int_distribution<int> coin(0, 2);
        if (depth == 0 || coin(rng) == 0) return fmt::format("new VariableRefNode(\"v{}\")", names++);
        return fmt::format("new AssignmentNode({}, {})", node(depth - 1), node(depth - 1));
    }
};

std::string visitorDriver(std::mt19937& rng) {
    std::uniform_int_distribution<int> steps(1, 8), pick(0, 9), depth(0, 3);
    TreeGen g{rng};
    std::vector<std::string> nodeVars, ifaceVars, assignVars;
    std::string s;
    int n = steps(rng);
    for (int i = 0; i < n; ++i) {
        int p = pick(rng);
        std::string visitor = pick(rng) < 5 ? "TypeChecker" : "CodeGenerator";
        if (p < 3 || nodeVars.empty()) {
            std::string v = fmt::format("n{}", i);
            s += fmt::format("Node & {} = {};\n", v, g.node(depth(rng)));
            nodeVars.push_back(v);
            ifaceVars.push_back(v);
        } else if (p == 3) {
            std::string v = fmt::format("a{}", i);
            s += fmt::format("AssignmentNode & {} = new AssignmentNode({}, {});\n", v,
                             nodeVars[rng() % nodeVars.size()], g.node(1));
            assignVars.push_back(v);
            nodeVars.push_back(v);
        } else if (p == 4) {
            std::string v = fmt::format("r{}", i);
            s += fmt::format("VariableRefNode & {} = new VariableRefNode(\"w{}\");\n", v, i);
            nodeVars.push_back(v);
        } else if (p == 5 && !assignVars.empty()) {
            const auto& a = assignVars[rng() % assignVars.size()];
            s += fmt::format("{}.Visit({}.LHS());\n{}.Visit({}.RHS());\n", visitor, a, visitor, a);
        } else if (p == 6) {
            s += fmt::format("{}.Visit({});\n", visitor, nodeVars[rng() % nodeVars.size()]);
        } else if (p == 7 && !ifaceVars.empty()) {
            s += fmt::format("{} = {};\n", ifaceVars[rng() % ifaceVars.size()], g.node(depth(rng)));
        } else {
            s += fmt::format("{}.Visit({});\n", visitor, g.node(depth(rng)));
        }
    }
    return s;
}

Outcome completenessSoundness() {
    std::string path = kCorpus + "/visitor_mm.rom";
    std::string text = readFile(path);
    size_t cut = text.find("\nNode & root");
    if (cut == std::string::npos) return {false, "visitor_mm.rom has no driver section"};
    std::string decls = text.substr(0, cut + 1);

    std::mt19937 rng(20261014);
    int accepted = 0, rejected = 0, mmNone = 0, otherErrors = 0, dynamic = 0;
    for (int i = 0; i < 1000; ++i) {
        RunOut r = runText(decls + visitorDriver(rng));
        if (!r.checked) {
            ++rejected;
            continue;
        }
        ++accepted;
        dynamic += static_cast<int>(r.result.stats.dynamicDispatches);
        if (!r.result.ok) (r.result.error.code == "R-MM-NONE" ? mmNone : otherErrors)++;
    }

    auto inc = compile_files({kCorpus + "/visitor_incomplete.rom"});
    bool incompleteNamed = false;
    for (const auto& d : inc->diags.all())
        if (d.code == "E-MM-INCOMPLETE" && d.severity == Severity::Error &&
            d.message.find("VariableRefNode") != std::string::npos)
            incompleteNamed = true;
    bool incRejected = !inc->ok() && incompleteNamed;

    // control: the same program without the completeness check does fail at run time
    CheckOptions open;
    open.openWorld = true;
    auto ow = compile_files({kCorpus + "/visitor_incomplete.rom"}, open);
    bool controlFires = false;
    if (ow->ok()) controlFires = execute(*ow).result.error.code == "R-MM-NONE";

    std::string detail = fmt::format(
        "{} accepted drivers, {} dynamic dispatches, {} R-MM-NONE, {} other runtime errors, {} "
        "rejected; visitor_incomplete {}; open-world control {}",
        accepted, dynamic, mmNone, otherErrors, rejected,
        incRejected ? "rejected naming VariableRefNode" : "NOT rejected as expected",
        controlFires ? "raises R-MM-NONE" : "did not raise R-MM-NONE");
    return {accepted >= 1000 && rejected == 0 && mmNone == 0 && otherErrors == 0 && incRejected && controlFires,
            detail};
}

// 5 ------------------------------------------------------------------------

int linearScan(const Family& f, const std::vector<std::string>& classes) {
    for (size_t o = 0; o < f.overloads.size(); ++o) {
        bool all = f.tuples[o].size() == classes.size();
        for (size_t k = 0; all && k < classes.size(); ++k)
            if (f.tuples[o][k] != classes[k]) all = false;
        if (all) return f.overloads[o];
    }
    return -1;
}

std::vector<std::vector<int>> allTuples(int classes, int positions) {
    std::vector<std::vector<int>> out{{}};
    for (int p = 0; p < positions; ++p) {
        std::vector<std::vector<int>> next;
        for (const auto& t : out)
            for (int c = 0; c < classes; ++c) {
                auto u = t;
                u.push_back(c);
                next.push_back(u);
            }
        out = std::move(next);
    }
    return out;
}

Outcome dispatchOracle() {
    std::mt19937 rng(7);
    size_t families = 0, queries = 0, agree = 0;

    // direct: random families against the selection routine
    for (int i = 0; i < 5000; ++i) {
        int nClasses = 1 + static_cast<int>(rng() % 5);
        int positions = 1 + static_cast<int>(rng() % 3);
        auto tuples = allTuples(nClasses, positions);
        std::shuffle(tuples.begin(), tuples.end(), rng);
        size_t count = 1 + rng() % tuples.size();
        Family f;
        f.dispatched.assign(static_cast<size_t>(positions), true);
        for (size_t o = 0; o < count; ++o) {
            f.overloads.push_back(static_cast<int>(100 + rng() % 1000));
            std::vector<std::string> t;
            for (int c : tuples[o]) t.push_back(fmt::format("K{}", c));
            f.tuples.push_back(t);
        }
        ++families;
        for (const auto& q : allTuples(nClasses, positions)) {
            std::vector<std::string> cls;
            for (int c : q) cls.push_back(fmt::format("K{}", c));
            ++queries;
            if (select_multimethod(f, cls) == linearScan(f, cls)) ++agree;
        }
    }

    // end to end: generated programs calling a global family through interface references
    size_t programs = 0, e2eQueries = 0, e2eAgree = 0;
    CheckOptions open;
    open.openWorld = true;
    for (int i = 0; i < 150; ++i) {
        int nClasses = 1 + static_cast<int>(rng() % 5);
        int positions = 1 + static_cast<int>(rng() % 3);
        auto tuples = allTuples(nClasses, positions);
        std::shuffle(tuples.begin(), tuples.end(), rng);
        size_t count = 1 + rng() % tuples.size();
        std::string decls = "interface S { int id(); };\n";
        for (int c = 0; c < nClasses; ++c)
            decls += fmt::format("class K{} {{ public: int id() {{ return {}; }} }};\n", c, c);
        Family f;
        for (size_t o = 0; o < count; ++o) {
            std::string ps;
            std::vector<std::string> t;
            for (int k = 0; k < positions; ++k) {
                ps += fmt::format("{}K{} & x{}", k ? ", " : "", tuples[o][static_cast<size_t>(k)], k);
                t.push_back(fmt::format("K{}", tuples[o][static_cast<size_t>(k)]));
            }
            decls += fmt::format("int f({}) {{ return {}; }}\n", ps, o);
            f.overloads.push_back(static_cast<int>(o));
            f.tuples.push_back(t);
        }
        ++programs;
        auto queriesAll = allTuples(nClasses, positions);
        std::shuffle(queriesAll.begin(), queriesAll.end(), rng);
        if (queriesAll.size() > 6) queriesAll.resize(6);
        for (const auto& q : queriesAll) {
            std::string s = decls;
            std::vector<std::string> cls, args;
            for (size_t k = 0; k < q.size(); ++k) {
                s += fmt::format("S & s{} = new K{};\n", k, q[k]);
                cls.push_back(fmt::format("K{}", q[k]));
                args.push_back(fmt::format("s{}", k));
            }
            std::string call;
            for (size_t k = 0; k < args.size(); ++k) call += (k ? ", " : "") + args[k];
            s += fmt::format("print(f({}));\n", call);
            RunOut r = runText(s, open);
            int want = linearScan(f, cls);
            ++e2eQueries;
            bool ok = r.checked && (want < 0 ? (!r.result.ok && r.result.error.code == "R-MM-NONE")
                                             : (r.result.ok && r.out == fmt::format("{}\n", want)));
            if (ok) ++e2eAgree;
        }
    }
    return {agree == queries && e2eAgree == e2eQueries,
            fmt::format("{} families, {}/{} tuples agree; {} programs, {}/{} runs agree", families,
                        agree, queries, programs, e2eAgree, e2eQueries)};
}

// 6 ------------------------------------------------------------------------

Outcome typecaseRtti() {
    std::vector<std::string> bad;
    RunOut corpus = runFile(kCorpus + "/typecase.rom");
    auto got = lines(corpus.out);
    const std::vector<std::string> want = {"A 1", "B 2", "C 3", "other d", "the object O"};
    if (!corpus.checked || !corpus.result.ok || got != want) bad.push_back("typecase.rom");

    const std::string decls = R"(interface P { string tag(); };
class A { public: string tag() { return "a"; } };
class B { public: string tag() { return "b"; } };
class C { public: string tag() { return "c"; } };
class D { public: string tag() { return "d"; } };
P & keep(P & p) { return p; }
)";
    std::vector<std::string> arms = {"A", "B", "C"};
    std::vector<std::string> runtime = {"A", "B", "C", "D"};
    int configs = 0;
    do {
        for (const auto& cls : runtime) {
            std::string s = decls + "void pick(P & p) {\n    typecase (p) {\n";
            for (const auto& a : arms) s += fmt::format("        case {}: print(\"{}\");\n", a, a);
            s += "        default: print(\"default\");\n    }\n}\n";
            s += fmt::format("pick(new {});\npick(keep(new {}));\nP & v = new {};\npick(v);\n", cls,
                             cls, cls);
            std::string expect = cls == "D" ? "default" : cls;
            RunOut r = runText(s);
            ++configs;
            if (!r.checked || !r.result.ok ||
                r.out != fmt::format("{}\n{}\n{}\n", expect, expect, expect))
                bad.push_back(fmt::format("arms {}{}{} on {}", arms[0], arms[1], arms[2], cls));
        }
    } while (std::next_permutation(arms.begin(), arms.end()));

    if (bad.empty())
        return {true, fmt::format("corpus listing plus {} generated arm orders and scrutinees",
                                  configs)};
    return {false, "wrong arm: " + bad.front()};
}

// 7 ------------------------------------------------------------------------

std::string checkStream(const std::string& path) {
    auto c = compile_files({path});
    return formatAll(c->diags, c->sm, DiagFormat::Human) +
           formatAll(c->diags, c->sm, DiagFormat::Json);
}

std::string runStream(const std::string& path) {
    auto c = compile_files({path});
    if (!c->ok()) return "(rejected)";
    Execution e = execute(*c);
    std::string s = e.out;
    if (!e.result.ok) s += formatRuntimeError(e.result.error, c->sm);
    return s;
}

Outcome determinism() {
    auto files = find_corpus_programs(kCorpus);
    std::vector<std::string> check1, check2, run1, run2;
    for (const auto& f : files) check1.push_back(checkStream(f));
    for (const auto& f : files) check2.push_back(checkStream(f));
    for (const auto& f : files) run1.push_back(runStream(f));
    for (const auto& f : files) run2.push_back(runStream(f));
    size_t same = 0;
    for (size_t i = 0; i < files.size(); ++i)
        if (check1[i] == check2[i] && run1[i] == run2[i]) ++same;
    return {same == files.size() && !files.empty(),
            fmt::format("{}/{} corpus files identical across two check and two run passes", same,
                        files.size())};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> fn;
    };
    std::vector<Criterion> all = {
        {1, "paper annotations", paperAnnotations},
        {2, "conformance oracle", conformanceOracle},
        {3, "flattening twins", flatteningTwins},
        {4, "completeness soundness", completenessSoundness},
        {5, "dispatch oracle", dispatchOracle},
        {6, "typecase RTTI", typecaseRtti},
        {7, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.fn();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        fmt::print("[{}] {} {} ({:.1f}s): {}\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                   o.detail);
    }
    return failed == 0 ? 0 : 1;
}
