#include "doctest.h"
#include "support.hpp"

#include "rom/dump.hpp"

#include <fmt/format.h>

#include <set>

using namespace rom;

namespace {

std::string corpus(const std::string& name) { return std::string(ROM_CORPUS_DIR) + "/" + name; }

bool hasCode(const Compilation& c, const std::string& code) {
    for (const auto& d : c.diags.all())
        if (d.code == code) return true;
    return false;
}

const char* kNodes = R"(
interface Node { void Show(); };
class Leaf { public: void Show() { } };
class Pair { public: void Show() { } };
)";

}  // namespace

TEST_CASE("paper listings check cleanly") {
    for (const char* f : {"interfaces.rom", "colorpoint_selftype.rom", "theft_cde.rom",
                          "sharing.rom", "singleton.rom", "visitor_mm.rom", "typecase.rom",
                          "package_motif.rom", "product_library.rom", "factory_meta.rom"})
        CHECK_MESSAGE(compile_files({corpus(f)})->diags.empty(), f);
}

TEST_CASE("covariant misuse without selftype is a type error") {
    auto c = compile_files({corpus("colorpoint_broken.rom")});
    REQUIRE(c->diags.all().size() == 1);
    CHECK(c->diags.all()[0].code == "E-TYPE");
    CHECK(c->diags.all()[0].loc.line == 24);
}

TEST_CASE("assignment rules") {
    const char* base = R"(
interface I { void h(); };
interface T { int value(); };
class C { public: void h() { } };
class D { public: void k() { } };
object Singleton1 { public: int value() { return 1; } };
)";
    CHECK(test::clean(std::string(base) + "I & ip = new C;\nT & p = Singleton1;\nC & c = new C;\n"));
    auto bad = test::compile(std::string(base) + "D & d = new C;\n");
    CHECK(test::codes(*bad) == std::vector<std::string>{"E-CLASS-ASSIGN"});
    auto nc = test::compile(std::string(base) + "I & ip = new D;\n");
    REQUIRE(test::codes(*nc) == std::vector<std::string>{"E-CONFORM"});
    CHECK(nc->diags.all()[0].message.find("void h()") != std::string::npos);
    // inheritance does not make subtypes
    auto inh = compile_files({corpus("diagnostics/class_assign.rom")});
    CHECK(test::codes(*inh) == std::vector<std::string>{"E-CLASS-ASSIGN"});
    // interface to interface by width
    CHECK(test::clean(std::string(base) +
                      "interface Wide { void h(); int z(); };\nWide & w;\nI & i = w;\n"));
    CHECK(hasCode(*test::compile(std::string(base) +
                                 "interface Wide { void h(); int z(); };\nI & i;\nWide & w = i;\n"),
                  "E-CONFORM"));
}

TEST_CASE("multimethod family rules") {
    const char* base = R"(
interface S { int id(); };
class C { public: int id() { return 1; } };
class D { public: int id() { return 2; } };
)";
    auto ok = test::compile(std::string(base) + "int f(C & c) { return 1; }\nint f(D & d) { return 2; }\n");
    REQUIRE(ok->ok());
    const Family* fam = ok->prog->globalFamily({MethodSpace::Instance, -1, "f", 1});
    REQUIRE(fam);
    CHECK(fam->dispatched == std::vector<bool>{true});
    CHECK(fam->tuples == std::vector<std::vector<std::string>>{{"C"}, {"D"}});

    auto dflt = test::compile(std::string(base) +
                              "int f(C & c) { return 1; }\nint f(D & d) { return 2; }\nint f(S & s) { return 0; }\n");
    CHECK(test::codes(*dflt) == std::vector<std::string>{"E-MM-DEFAULT"});

    auto plain = test::compile(std::string(base) + "int f(S & s, int n) { return n; }\n");
    REQUIRE(plain->ok());
    const Family* pf = plain->prog->globalFamily({MethodSpace::Instance, -1, "f", 2});
    REQUIRE(pf);
    CHECK(pf->dispatched == std::vector<bool>{false, false});

    auto sig = test::compile(std::string(base) +
                             "int f(C & c, S & s) { return 1; }\nint f(D & d, int n) { return 2; }\n");
    CHECK(test::codes(*sig) == std::vector<std::string>{"E-MM-SIG"});
    auto ret = test::compile(std::string(base) +
                             "int f(C & c) { return 1; }\nbool f(D & d) { return true; }\n");
    CHECK(test::codes(*ret) == std::vector<std::string>{"E-MM-SIG"});
    auto dup = test::compile(std::string(base) +
                             "int f(C & c) { return 1; }\nint f(C & other) { return 2; }\n");
    CHECK(test::codes(*dup) == std::vector<std::string>{"E-MM-DUP"});

    // methods of one class form families too
    auto inClass = test::compile(std::string(base) + R"(
object V {
public:
    int visit(C & c) { return 1; }
    int visit(D & d) { return 2; }
    int visit(S & s) { return 0; }
};
)");
    CHECK(test::codes(*inClass) == std::vector<std::string>{"E-MM-DEFAULT"});
}

TEST_CASE("subtype graph") {
    auto c = compile_files({corpus("interfaces.rom")});
    REQUIRE(c->ok());
    using Edge = std::pair<std::string, std::string>;
    CHECK(c->prog->subtypeEdges == std::vector<Edge>{{"C", "I"}, {"D", "I"}});
    CHECK(dump_subtypes(*c->prog) == "C <: I\nD <: I\n");
    auto none = test::compile("class A { };\nclass B { };\n");
    REQUIRE(none->ok());
    CHECK(none->prog->subtypeEdges.empty());
}

TEST_CASE("subtype graph equals pairwise conformance on the corpus") {
    for (const auto& path : find_corpus_programs(ROM_CORPUS_DIR)) {
        auto c = compile_files({path});
        if (!c->prog) continue;
        TypeSystem ts(*c->prog);
        std::set<std::pair<std::string, std::string>> brute;
        for (const auto& impl : c->prog->implOrder)
            for (const auto& i : c->prog->interfaceOrder)
                if (ts.conforms(c->prog->findImpl(impl)->selfType, i)) brute.insert({impl, i});
        std::set<std::pair<std::string, std::string>> graph(c->prog->subtypeEdges.begin(),
                                                            c->prog->subtypeEdges.end());
        CHECK_MESSAGE(graph == brute, path);
        CHECK(graph.size() == c->prog->subtypeEdges.size());
    }
}

TEST_CASE("completeness") {
    CHECK(compile_files({corpus("visitor_mm.rom")})->diags.empty());
    auto inc = compile_files({corpus("visitor_incomplete.rom")});
    REQUIRE(hasCode(*inc, "E-MM-INCOMPLETE"));
    for (const auto& d : inc->diags.all())
        if (d.code == "E-MM-INCOMPLETE") CHECK(d.message.find("VariableRefNode") != std::string::npos);

    // a class-typed argument is ordinary overloading: no enumeration
    std::string partial = std::string(kNodes) + R"(
object V { public: void visit(Leaf & l) { print("leaf"); } };
Leaf & l = new Leaf;
V.visit(l);
)";
    CHECK(test::clean(partial));
    auto viaIface = test::compile(partial + "Node & n = new Pair;\nV.visit(n);\n");
    CHECK(test::codes(*viaIface) == std::vector<std::string>{"E-MM-INCOMPLETE"});
    CHECK(viaIface->diags.all()[0].message.find("(Pair)") != std::string::npos);

    // every missing tuple of a two-position family is listed
    auto two = test::compile(std::string(kNodes) + R"(
int both(Leaf & a, Leaf & b) { return 1; }
int both(Pair & a, Pair & b) { return 2; }
Node & x = new Leaf;
Node & y = new Pair;
int r = both(x, y);
)");
    REQUIRE(test::codes(*two) == std::vector<std::string>{"E-MM-INCOMPLETE"});
    const auto& msg = two->diags.all()[0].message;
    CHECK(msg.find("(Pair, Leaf)") != std::string::npos);
    CHECK(msg.find("(Leaf, Pair)") != std::string::npos);
    CHECK(msg.find("(Leaf, Leaf)") == std::string::npos);

    // open world turns it into a warning
    auto ow = test::compile(partial + "Node & n = new Pair;\nV.visit(n);\n", true);
    CHECK(ow->ok());
    REQUIRE(ow->diags.all().size() == 1);
    CHECK(ow->diags.all()[0].severity == Severity::Warning);
}

TEST_CASE("typecase typing") {
    CHECK(compile_files({corpus("typecase.rom")})->diags.empty());
    const char* base = R"(
interface P { string tag(); };
class A { public: string tag() { return "a"; } int onlyA() { return 1; } };
class B { public: string tag() { return "b"; } };
class Q { };
)";
    // the scrutinee is retyped inside an arm only
    CHECK(test::clean(std::string(base) +
                      "P & p = new A;\ntypecase (p) { case A: print(p.onlyA()); default: print(p.tag()); }\n"));
    CHECK(hasCode(*test::compile(std::string(base) +
                                 "P & p = new A;\ntypecase (p) { case B: print(p.onlyA()); }\n"),
                  "E-UNDEF"));
    CHECK(hasCode(*test::compile(std::string(base) + "P & p = new A;\nint k = p.onlyA();\n"),
                  "E-UNDEF"));
    auto dead = test::compile(std::string(base) + "P & p = new A;\ntypecase (p) { case Q: print(1); }\n");
    CHECK(dead->ok());
    REQUIRE(test::codes(*dead) == std::vector<std::string>{"E-TYPECASE-DEAD"});
    CHECK(dead->diags.all()[0].severity == Severity::Warning);
    auto scrut = test::compile(std::string(base) + "A & a = new A;\ntypecase (a) { case A: print(1); }\n");
    CHECK(test::codes(*scrut) == std::vector<std::string>{"E-TYPECASE-SCRUT"});
}

TEST_CASE("access control") {
    CHECK(compile_files({corpus("visitor_mm.rom")})->diags.empty());
    auto noFriend = test::compile(R"(
class Secret { string name = "s"; };
object Reader { public: string read(Secret & s) { return s.name; } };
)");
    CHECK(test::codes(*noFriend) == std::vector<std::string>{"E-ACCESS"});
    CHECK(test::clean(R"(
class Secret { string name = "s"; friend Reader; };
object Reader { public: string read(Secret & s) { return s.name; } };
)"));
    // protected is visible to code copied into descendants, not from outside
    CHECK(test::clean(R"(
class A { protected: int n = 1; };
class B : public A { public: int get() { return n; } };
)"));
    CHECK(hasCode(*test::compile("class A { protected: int n = 1; };\nA & a = new A;\nint k = a.n;\n"),
                  "E-ACCESS"));
    // public meta members from anywhere, private ones only inside
    CHECK(test::clean(R"(
class A { meta private: int i = 0; meta public: int geti() { return i; } };
int k = A.geti();
)"));
    CHECK(hasCode(*test::compile(R"(
class A { meta private: int i = 0; meta public: int geti() { return i; } };
int k = A.i;
)"),
                  "E-ACCESS"));
}

TEST_CASE("abstract classes") {
    CHECK(test::codes(*compile_files({corpus("diagnostics/abstract.rom")})) ==
          std::vector<std::string>{"E-ABSTRACT"});
    CHECK(test::clean(R"(
class Shape { public: abstract double area(); double twice() { return area() * 2; } };
class Square : public Shape { public: double area() { return 4.0; } };
Square & s = new Square;
)"));
}

TEST_CASE("implements clauses are checked but optional") {
    auto c = compile_files({corpus("diagnostics/implements.rom")});
    CHECK(test::codes(*c) == std::vector<std::string>{"E-IMPLEMENTS"});
    CHECK(test::clean("interface I { void h(); };\nclass C : implements I { public: void h() { } };\n"));
}

TEST_CASE("diagnostics are sorted and formatted") {
    auto c = test::compile(R"(
class A { };
int x = y;
D & d = new A;
int z = q;
)");
    const auto& ds = c->diags.all();
    REQUIRE(ds.size() == 3);
    for (size_t i = 1; i < ds.size(); ++i) CHECK(ds[i - 1].loc < ds[i].loc);
    auto human = formatDiagnostic(ds[0], c->sm, DiagFormat::Human);
    CHECK(human.rfind("t.rom:3:9: E-UNDEF: ", 0) == 0);
    auto json = formatDiagnostic(ds[0], c->sm, DiagFormat::Json);
    for (const char* key : {"\"code\":\"E-UNDEF\"", "\"severity\":\"error\"", "\"file\":\"t.rom\"",
                            "\"line\":3", "\"col\":9", "\"message\":"})
        CHECK_MESSAGE(json.find(key) != std::string::npos, json);
    CHECK(shortForm(c->diags).rfind("3:9: E-UNDEF\n", 0) == 0);
}

TEST_CASE("checking is deterministic") {
    for (const auto& path : find_corpus_programs(ROM_CORPUS_DIR)) {
        auto a = compile_files({path});
        auto b = compile_files({path});
        CHECK(formatAll(a->diags, a->sm, DiagFormat::Json) ==
              formatAll(b->diags, b->sm, DiagFormat::Json));
        if (a->prog && b->prog) {
            CHECK(dump_flattened(*a->prog) == dump_flattened(*b->prog));
            CHECK(dump_dispatch(*a->prog) == dump_dispatch(*b->prog));
            CHECK(dump_types(*a->prog) == dump_types(*b->prog));
        }
    }
}
