#include "doctest.h"
#include "support.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <random>
#include <set>

using namespace rom;

namespace {

std::string corpus(const std::string& name) { return std::string(ROM_CORPUS_DIR) + "/" + name; }

std::set<std::string> providedNames(const ImplDescriptor& d) {
    std::set<std::string> out;
    for (const auto& m : d.provided.methods) out.insert(m.name);
    return out;
}

const MethodSig* providedSig(const ImplDescriptor& d, const std::string& name) {
    for (const auto& m : d.provided.methods)
        if (m.name == name) return &m;
    return nullptr;
}

const MethodImpl* providedImpl(const ImplDescriptor& d, const std::string& name) {
    for (size_t i = 0; i < d.provided.methods.size(); ++i)
        if (d.provided.methods[i].name == name)
            return &d.methods[static_cast<size_t>(d.providedMethods[i])];
    return nullptr;
}

int partitionsOf(const ImplDescriptor& d, const std::string& decl) {
    return static_cast<int>(std::count_if(d.partitions.begin(), d.partitions.end(),
                                          [&](const Partition& p) { return p.declId == decl; }));
}

std::vector<std::string> errorCodesOf(const std::string& path) {
    auto c = compile_files({path});
    std::vector<std::string> out;
    for (const auto& d : c->diags.all())
        if (d.severity == Severity::Error) out.push_back(d.code);
    return out;
}

}  // namespace

TEST_CASE("inherited selftype signatures are rebound") {
    auto c = compile_files({corpus("colorpoint_selftype.rom")});
    REQUIRE(c->ok());
    const auto* cp = c->prog->findImpl("ColorPoint");
    REQUIRE(cp);
    const auto* closer = providedSig(*cp, "closer");
    REQUIRE(closer);
    CHECK(closer->str() == "ColorPoint& closer(ColorPoint&)");
    CHECK(providedImpl(*cp, "closer")->origin == "Point");
    CHECK(providedSig(*c->prog->findImpl("Point"), "closer")->str() == "Point& closer(Point&)");
}

TEST_CASE("a class without parents is its own members") {
    auto c = test::compile("class P { int x = 1; public: int get() { return x; } void put(int v) { x = v; } };");
    REQUIRE(c->ok());
    const auto& d = *c->prog->findImpl("P");
    CHECK(d.parts.size() == 1);
    CHECK(d.partitions.size() == 1);
    CHECK(d.partitions[0].fields.size() == 1);
    CHECK(providedNames(d) == std::set<std::string>{"get", "put"});
    for (const auto& m : d.methods) CHECK(m.origin == "P");
}

TEST_CASE("theft, exclusion and renaming in CDE") {
    auto c = compile_files({corpus("theft_cde.rom")});
    REQUIRE(c->ok());
    const auto& d = *c->prog->findImpl("CDE");
    auto names = providedNames(d);
    CHECK(names == std::set<std::string>{"E_g", "bump", "f", "g", "h", "run", "total"});
    CHECK(providedImpl(d, "f")->origin == "E");
    CHECK(providedImpl(d, "g")->origin == "D");
    CHECK(providedImpl(d, "E_g")->origin == "E");
    // privately stolen members exist but are not exported
    int f1 = 0;
    for (const auto& m : d.methods)
        if (m.sig.name == "f1") ++f1;
    CHECK(f1 == 1);
    TypeSystem ts(*c->prog);
    CHECK(ts.conforms(d.selfType, "DLike"));
    CHECK(partitionsOf(d, "A") == 2);
}

TEST_CASE("sharing constraints merge partitions") {
    auto c = compile_files({corpus("sharing.rom")});
    REQUIRE(c->ok());
    const auto& shared = *c->prog->findImpl("Shared");
    const auto& split = *c->prog->findImpl("Split");
    CHECK(partitionsOf(shared, "A") == 1);
    CHECK(partitionsOf(split, "A") == 2);
    CHECK(split.partitions.size() == shared.partitions.size() + 1);
    // both A parts of Shared point at the same partition
    std::set<int> aPartitions;
    for (const auto& p : shared.parts)
        if (p.declId == "A") aPartitions.insert(p.partition);
    CHECK(aPartitions.size() == 1);
}

TEST_CASE("partition count equals ancestor copies") {
    for (const auto& path : find_corpus_programs(ROM_CORPUS_DIR)) {
        auto c = compile_files({path});
        if (!c->ok()) continue;
        for (const auto& [id, d] : c->prog->impls) {
            std::map<std::string, std::set<int>> byDecl;
            for (const auto& p : d->parts) byDecl[p.declId].insert(p.partition);
            for (const auto& [decl, parts] : byDecl)
                CHECK_MESSAGE(static_cast<int>(parts.size()) == partitionsOf(*d, decl),
                              (path + " " + id + " " + decl));
        }
    }
}

TEST_CASE("no descriptor exports two methods with one signature") {
    for (const auto& path : find_corpus_programs(ROM_CORPUS_DIR)) {
        auto c = compile_files({path});
        if (!c->ok()) continue;
        for (const auto& [id, d] : c->prog->impls) {
            std::set<std::string> seen;
            for (const auto& m : d->provided.methods)
                CHECK_MESSAGE(seen.insert(m.str()).second, (path + " " + id + " " + m.str()));
        }
    }
}

TEST_CASE("object inheritance and abstract objects") {
    auto c = compile_files({corpus("singleton.rom")});
    REQUIRE(c->ok());
    const auto& s1 = *c->prog->findImpl("Singleton1");
    const auto& s2 = *c->prog->findImpl("Singleton2");
    CHECK(s2.isObject);
    auto n1 = providedNames(s1), n2 = providedNames(s2);
    CHECK(std::includes(n2.begin(), n2.end(), n1.begin(), n1.end()));
    CHECK(n2.count("extra"));

    auto a = test::compile(R"(
object Base { public: abstract int f(); int twice() { return f() * 2; } };
object Impl : public Base { public: int f() { return 21; } };
print(Impl.twice());
)");
    REQUIRE(a->ok());
    CHECK(a->prog->findImpl("Base")->abstract);
    CHECK_FALSE(a->prog->findImpl("Impl")->abstract);
    CHECK(test::run(R"(
object Base { public: abstract int f(); };
int g() { return Base.f(); }
)").rfind("rejected", 0) == 0);

    auto e = test::compile("object Nothing { };");
    REQUIRE(e->ok());
    CHECK(e->prog->findImpl("Nothing")->methods.empty());
    CHECK(e->prog->findImpl("Nothing")->partitions[0].fields.empty());
}

TEST_CASE("import synthesizes final forwarders") {
    auto c = test::compile(R"(
class C { public: void h() { print("C.h"); } int f() { return 1; } int g() { return 2; } };
class All { import C; };
class Some { import C only f; };
)");
    REQUIRE(c->ok());
    const auto& all = *c->prog->findImpl("All");
    CHECK(providedNames(all) == std::set<std::string>{"f", "g", "h"});
    const auto* h = providedImpl(all, "h");
    REQUIRE(h);
    CHECK(h->kind == MethodKind::Forwarder);
    CHECK(h->sig.isFinal);
    CHECK(providedNames(*c->prog->findImpl("Some")) == std::set<std::string>{"f"});

    CHECK(test::run(R"(
class C { public: int f() { return 1; } };
class Imp { import C; };
class Over : public Imp { public: int f() { return 2; } };
)").find("E-FINAL-OVERRIDE") != std::string::npos);
}

TEST_CASE("theft is monotone") {
    const std::vector<std::string> members = {"a", "b", "c", "d", "e"};
    std::mt19937 rng(9);
    for (int round = 0; round < 30; ++round) {
        std::vector<std::string> chosen;
        for (const auto& m : members)
            if (rng() % 2) chosen.push_back(m);
        if (chosen.empty()) chosen.push_back("a");
        std::string list;
        for (size_t i = 0; i < chosen.size(); ++i) list += (i ? ", " : "") + chosen[i];
        std::string src = "class P { public:";
        for (const auto& m : members) src += fmt::format(" int {}() {{ return 0; }}", m);
        src += " };\nclass Full : public P { };\nclass Part : public P only " + list + "; { };\n";
        auto c = test::compile(src);
        REQUIRE_MESSAGE(c->ok(), src);
        auto full = providedNames(*c->prog->findImpl("Full"));
        auto part = providedNames(*c->prog->findImpl("Part"));
        CHECK(std::includes(full.begin(), full.end(), part.begin(), part.end()));
        CHECK(part == std::set<std::string>(chosen.begin(), chosen.end()));
    }
}

TEST_CASE("field initialization follows clause order, once per partition") {
    const char* src = R"(
int note(string s) { print(s); return 0; }
class A { int a = note("A"); };
class B { int b = note("B"); };
class D : public A { int d = note("D"); };
class E : public A { int e = note("E"); };
class AB : public A, public B { int own = note("AB"); };
class BA : public B, public A { int own = note("BA"); };
class Shared : public D, public E { sharing D::A == E::A; };
class Split : public D, public E { };
AB & x = new AB;
BA & y = new BA;
Shared & s = new Shared;
Split & t = new Split;
)";
    CHECK(test::run(src) == "A\nB\nAB\nB\nA\nBA\nA\nD\nE\nA\nD\nA\nE\n");
}

TEST_CASE("elaboration errors") {
    auto dir = std::string(ROM_CORPUS_DIR) + "/diagnostics/";
    CHECK(errorCodesOf(dir + "name_clash.rom") == std::vector<std::string>{"E-NAME-CLASH"});
    CHECK(errorCodesOf(dir + "final_override.rom") == std::vector<std::string>{"E-FINAL-OVERRIDE"});
    CHECK(errorCodesOf(dir + "share.rom") == std::vector<std::string>{"E-SHARE"});
    CHECK(errorCodesOf(dir + "unknown_member.rom") == std::vector<std::string>{"E-UNKNOWN-MEMBER"});
    CHECK(errorCodesOf(dir + "import_abstract.rom") ==
          std::vector<std::string>{"E-IMPORT-ABSTRACT"});
    CHECK(errorCodesOf(dir + "selftype_in_object.rom") ==
          std::vector<std::string>{"E-SELFTYPE-IN-OBJECT"});
    auto cyc = errorCodesOf(dir + "cycle.rom");
    CHECK_FALSE(cyc.empty());
    for (const auto& code : cyc) CHECK(code == "E-CYCLE");

    // a rename resolves a clash
    CHECK(test::clean(R"(
class L { public: int f() { return 1; } };
class R { public: int f() { return 2; } };
class Both : public L, public R rename f to rf; { };
)"));
    // overriding both copies also resolves it
    CHECK(test::clean(R"(
class L { public: int f() { return 1; } };
class R { public: int f() { return 2; } };
class Both : public L, public R { public: int f() { return 3; } };
)"));
    // private members cannot be stolen
    CHECK(test::codes(*test::compile(R"(
class A { int secret() { return 1; } public: int f() { return 2; } };
class B : public A only secret; { };
)")) == std::vector<std::string>{"E-UNKNOWN-MEMBER"});
    CHECK(test::clean(R"(
class A { protected: int kept() { return 1; } public: int f() { return 2; } };
class B : public A only kept; { public: int g() { return kept(); } };
)"));
}

TEST_CASE("default new and meta sections") {
    auto c = compile_files({corpus("factory_meta.rom")});
    REQUIRE(c->ok());
    const auto& a = *c->prog->findImpl("A");
    bool hasNew = false;
    for (const auto& m : a.metaMethods)
        if (m.isNew) hasNew = true;
    CHECK(hasNew);
    CHECK(a.metaFields.size() == 1);
    auto d = test::compile("class Z { int k; };");
    REQUIRE(d->ok());
    const auto& z = *d->prog->findImpl("Z");
    REQUIRE(z.metaMethods.size() == 1);
    CHECK(z.metaMethods[0].kind == MethodKind::DefaultNew);
    CHECK(z.metaMethods[0].sig.params.empty());
}
