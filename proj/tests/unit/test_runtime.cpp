#include "doctest.h"
#include "support.hpp"

#include <fmt/format.h>

#include <random>

using namespace rom;

namespace {

std::string corpus(const std::string& name) { return std::string(ROM_CORPUS_DIR) + "/" + name; }

Execution runFile(const std::string& name) {
    auto c = compile_files({corpus(name)});
    REQUIRE_MESSAGE(c->ok(), name);
    return execute(*c);
}

Execution runSrc(const std::string& src, bool openWorld = false) {
    auto c = test::compile(src, openWorld);
    REQUIRE_MESSAGE(c->ok(), src);
    return execute(*c);
}

}  // namespace

TEST_CASE("empty program") {
    auto e = runSrc("");
    CHECK(e.result.ok);
    CHECK(e.out.empty());
}

TEST_CASE("closure objects and function closures") {
    CHECK(runFile("counter.rom").out == "101\n7\n101\n");
    CHECK(runFile("funcounter.rom").out == "100\n101\n0\n102\n");
    CHECK(test::run(R"(
interface Counter { void Next(); int Current(); };
Counter & MakeCounter(int value) {
    return object { void Next() { value++; } int Current() { return value; } };
}
Counter & a = MakeCounter(0);
Counter & b = MakeCounter(0);
a.Next(); a.Next(); b.Next();
print(a.Current());
print(b.Current());
)") == "2\n1\n");
}

TEST_CASE("nested closures see the outer iteration") {
    auto out = runFile("foreach_nested.rom").out;
    CHECK_FALSE(out.empty());
}

TEST_CASE("closures share one activation and never alias across activations") {
    std::mt19937 rng(17);
    for (int round = 0; round < 40; ++round) {
        const int k = 1 + static_cast<int>(rng() % 4);
        std::string src = "interface Cell { void inc(); int get(); };\n";
        for (int i = 0; i < k; ++i) src += fmt::format("Cell & a{0};\nCell & b{0};\n", i);
        src += "int made = 0;\n";
        for (int i = 0; i < k; ++i)
            src += fmt::format(R"(void make{0}(int v) {{
    a{0} = object {{ void inc() {{ v = v + 1; }} int get() {{ return v; }} }};
    b{0} = object {{ void inc() {{ v = v + 10; }} int get() {{ return v; }} }};
}}
)",
                               i);
        std::vector<int> model(static_cast<size_t>(k));
        std::string expect;
        for (int i = 0; i < k; ++i) {
            int start = static_cast<int>(rng() % 5);
            src += fmt::format("make{}({});\n", i, start);
            model[static_cast<size_t>(i)] = start;
        }
        for (int step = 0; step < 20; ++step) {
            int i = static_cast<int>(rng() % static_cast<unsigned>(k));
            auto& v = model[static_cast<size_t>(i)];
            switch (rng() % 4) {
                case 0: src += fmt::format("a{}.inc();\n", i); v += 1; break;
                case 1: src += fmt::format("b{}.inc();\n", i); v += 10; break;
                case 2: src += fmt::format("print(a{}.get());\n", i); expect += fmt::format("{}\n", v); break;
                default: src += fmt::format("print(b{}.get());\n", i); expect += fmt::format("{}\n", v); break;
            }
        }
        CHECK_MESSAGE(test::run(src) == expect, src);
    }
}

TEST_CASE("metaclass new and factories") {
    auto out = runFile("factory_meta.rom").out;
    CHECK(out.rfind("motif window 0 0 100 100\n", 0) == 0);
    CHECK(test::run(R"(
class Empty { public: int one() { return 1; } };
Empty & e = new Empty;
print(e.one());
)") == "1\n");
    CHECK(test::run(R"(
class P { int x; string s; double d; bool b; public: void show() { print(x); print(s + "|"); print(d); print(b); } };
P & p = new P;
p.show();
)") == "0\n|\n0\nfalse\n");
}

TEST_CASE("shared and split partitions") {
    CHECK(runFile("sharing.rom").out == "4\n4\n4\n1\n2\n");
}

TEST_CASE("interface references dispatch through tables") {
    CHECK(runFile("interfaces.rom").out == "C.h\n2\nD.h\n14\n");
    CHECK(runFile("rename.rom").out == "Graphic1.render\nmoved to 3,4\n");

    auto e = runSrc(R"(
interface I { int g(int); };
class C { public: int g(int x) { return x + 1; } };
I & a = new C;
I & b = new C;
I & c = a;
C & k = new C;
I & d = k;
print(a.g(1) + b.g(1) + c.g(1) + d.g(1));
)");
    CHECK(e.out == "8\n");
    CHECK(e.result.stats.tablesBuilt == 1);
    CHECK(e.result.stats.tableLookups == 3);  // copying a fat reference binds nothing

    auto views = runSrc(R"(
interface Graphic { void draw(); };
class G { public: void render() { print("r"); } void paint() { print("p"); } };
Graphic & x = (rename render to draw) new G;
Graphic & y = (rename render to draw) new G;
Graphic & z = (rename paint to draw) new G;
x.draw(); y.draw(); z.draw();
)");
    CHECK(views.out == "r\nr\np\n");
    CHECK(views.result.stats.tablesBuilt == 2);
}

TEST_CASE("multimethods select on the run-time classes") {
    CHECK(runFile("mm_exact.rom").out == "1\n2\n1\n");
    auto v = runFile("visitor_mm.rom");
    CHECK(v.out.rfind("check assignment\ncheck variable x\n", 0) == 0);
    CHECK(v.result.stats.dynamicDispatches > 0);

    Family f;
    f.dispatched = {true, false, true};
    f.overloads = {4, 7, 9};
    f.tuples = {{"C", "C"}, {"C", "D"}, {"D", "C"}};
    CHECK(select_multimethod(f, {"C", "D"}) == 7);
    CHECK(select_multimethod(f, {"D", "C"}) == 9);
    CHECK(select_multimethod(f, {"D", "D"}) == -1);
    CHECK(select_multimethod(f, {"C"}) == -1);
}

TEST_CASE("no applicable method at run time under open world") {
    const char* src = R"(
interface S { int id(); };
class C { public: int id() { return 1; } };
class D { public: int id() { return 2; } };
int f(C & c) { return 1; }
S & p = new D;
print(f(p));
)";
    auto c = test::compile(src, true);
    REQUIRE(c->ok());
    auto e = execute(*c);
    REQUIRE_FALSE(e.result.ok);
    CHECK(e.result.error.code == "R-MM-NONE");
    CHECK(formatRuntimeError(e.result.error, c->sm).rfind("R-MM-NONE: t.rom:7:", 0) == 0);
    CHECK_FALSE(test::compile(src)->ok());
}

TEST_CASE("typecase uses run-time identity") {
    CHECK(runFile("typecase.rom").out == "A 1\nB 2\nC 3\nother d\nthe object O\n");
    const char* src = R"(
interface P { int id(); };
class A { public: int id() { return 1; } };
class B { public: int id() { return 2; } };
P & p = new B;
typecase (p) { case A: print("a"); }
)";
    CHECK(test::run(src) == "runtime: R-TYPECASE\n");
}

TEST_CASE("singletons are unique and lazily initialized") {
    CHECK(test::run(R"(
interface T { int value(); };
int note(string s) { print(s); return 1; }
object S { int base = note("init"); public: int value() { return base; } void bump() { base = base + 1; } };
print("start");
T & p = S;
T & q = S;
S.bump();
print(p.value());
print(q.value());
)") == "start\ninit\n2\n2\n");
}

TEST_CASE("statically fixed calls agree with run-time selection") {
    uint64_t checked = 0;
    for (const auto& path : find_corpus_programs(ROM_CORPUS_DIR)) {
        auto c = compile_files({path});
        if (!c->ok()) continue;
        auto e = execute(*c);
        CHECK_MESSAGE(e.result.stats.staticChecked == e.result.stats.staticAgreed, path);
        checked += e.result.stats.staticChecked;
    }
    CHECK(checked > 0);
}

TEST_CASE("run-time errors") {
    CHECK(test::run("int z = 0;\nprint(1 / z);\n") == "runtime: R-DIV-ZERO\n");
    CHECK(test::run("interface I { void h(); };\nI & i;\ni.h();\n") == "runtime: R-NULL\n");
    auto c = test::compile("print(\"before\");\nint z = 0;\nint q = 5 % z;\nprint(\"after\");\n");
    REQUIRE(c->ok());
    auto e = execute(*c);
    CHECK(e.out == "before\n");
    CHECK(e.result.error.code == "R-DIV-ZERO");
    CHECK(formatRuntimeError(e.result.error, c->sm).rfind("R-DIV-ZERO: t.rom:3:", 0) == 0);
}

TEST_CASE("evaluation order and short circuit") {
    CHECK(test::run(R"(
int say(int x) { print(x); return x; }
int add(int a, int b) { return a + b; }
print(add(say(1), say(2)));
bool t = true;
bool f = false;
if (f && say(3) == 3) { print("no"); }
if (t || say(4) == 4) { print("yes"); }
)") == "1\n2\n3\nyes\n");
    CHECK(test::run("double d = 3;\nprint(d / 2);\nprint(7 / 2);\n") == "1.5\n3\n");
}

TEST_CASE("imported methods behave like explicit forwarding") {
    auto orig = runFile("mixin.rom").out;
    auto twin = runFile("twins/mixin.rom").out;
    CHECK(orig == twin);
    CHECK_FALSE(orig.empty());
}
