#include "doctest.h"

#include "rom/driver.hpp"
#include "rom/lexer.hpp"
#include "rom/parser.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rom;

namespace {

std::vector<Tok> kinds(const std::string& src) {
    SourceManager sm;
    DiagnosticSink d;
    int f = sm.add("t.rom", src);
    std::vector<Tok> out;
    for (const auto& t : tokenize(sm, f, d)) out.push_back(t.kind);
    return out;
}

struct Parsed {
    SourceManager sm;
    DiagnosticSink diags;
    ProgramAst ast;
};

std::unique_ptr<Parsed> parseText(const std::string& src) {
    auto p = std::make_unique<Parsed>();
    int f = p->sm.add("t.rom", src);
    p->ast = parseFiles(p->sm, {f}, p->diags);
    return p;
}

std::string roundTrip(const std::string& src) {
    auto first = parseText(src);
    REQUIRE_MESSAGE(first->diags.empty(), src);
    std::string printed = pretty_print(first->ast);
    auto second = parseText(printed);
    REQUIRE_MESSAGE(second->diags.empty(), printed);
    CHECK_MESSAGE(ast_sexpr(first->ast) == ast_sexpr(second->ast), printed);
    return printed;
}

}  // namespace

TEST_CASE("tokenize interface header") {
    auto k = kinds("interface I { void h(); };");
    std::vector<Tok> want{Tok::KwInterface, Tok::Ident, Tok::LBrace, Tok::KwVoid, Tok::Ident,
                          Tok::LParen,      Tok::RParen, Tok::Semi,  Tok::RBrace, Tok::Semi,
                          Tok::Eof};
    CHECK(k == want);
}

TEST_CASE("tokenize empty input") { CHECK(kinds("") == std::vector<Tok>{Tok::Eof}); }

TEST_CASE("token texts are slices and locations increase") {
    SourceManager sm;
    DiagnosticSink d;
    std::string src = "object Singleton1 : public Singleton2 { };\n// c\n/* x\n */ int y = 3.5;";
    int f = sm.add("t.rom", src);
    auto toks = tokenize(sm, f, d);
    CHECK(d.empty());
    std::string joined;
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
        if (i) {
            CHECK(toks[i - 1].loc <= toks[i].loc);
        }
        const char* base = sm.file(f).text.data();
        CHECK(toks[i].text.data() >= base);
        CHECK(toks[i].text.data() + toks[i].text.size() <= base + src.size());
        joined += std::string(toks[i].text) + " ";
    }
    CHECK(joined == "object Singleton1 : public Singleton2 { } ; int y = 3.5 ; ");
}

TEST_CASE("unrecognized character is E-LEX") {
    SourceManager sm;
    DiagnosticSink d;
    int f = sm.add("t.rom", "int x = 1 @ 2;");
    tokenize(sm, f, d);
    REQUIRE(d.all().size() == 1);
    CHECK(d.all()[0].code == "E-LEX");
    CHECK(d.all()[0].loc.col == 11);
}

TEST_CASE("CDE inheritance clauses") {
    auto p = parseText(
        "class CDE :\n"
        "    private C only f1, f2;\n"
        "    public D except f;\n"
        "    public E only f, g rename g to E_g;\n"
        "{\n public:\n  void k() {}\n};\n");
    REQUIRE(p->diags.empty());
    REQUIRE(p->ast.decls.size() == 1);
    const auto& d = *std::get<std::shared_ptr<const ImplDecl>>(p->ast.decls[0].node);
    REQUIRE(d.clauses.size() == 3);
    CHECK(d.clauses[0].kind == InheritClause::Kind::Private);
    CHECK(d.clauses[0].filter.only == std::vector<std::string>{"f1", "f2"});
    CHECK(d.clauses[1].filter.except == std::vector<std::string>{"f"});
    CHECK(d.clauses[2].filter.only == std::vector<std::string>{"f", "g"});
    REQUIRE(d.clauses[2].filter.renames.size() == 1);
    CHECK(d.clauses[2].filter.renames[0].to == "E_g");
}

TEST_CASE("anonymous object expression") {
    auto p = parseText(
        "Counter& MakeCounter(int value) {\n"
        "    return object { void Next() { value++; } int Current() { return value; } };\n"
        "}\n");
    REQUIRE(p->diags.empty());
    const auto& m = std::get<MethodDecl>(p->ast.decls[0].node);
    const auto& ret = as<ReturnStmt>(*m.body->stmts[0]);
    REQUIRE(ret.value->kind == ExprKind::ObjectLit);
    const auto& obj = *as<ObjectLitExpr>(*ret.value).decl;
    CHECK(obj.anonymous);
    CHECK(obj.members.size() == 2);
}

TEST_CASE("parse errors recover at the next declaration") {
    auto p = parseText("class A { int x };\nclass B { };\nint y = ;\nclass C { };\n");
    CHECK(p->diags.errorCount() == 2);
    for (const auto& d : p->diags.all()) CHECK(d.code == "E-PARSE");
    CHECK(p->ast.decls.size() == 2);
}

TEST_CASE("pretty print basics") {
    auto p = parseText("");
    CHECK(pretty_print(p->ast).empty());
    std::string out = roundTrip("interface I { void h(); int g(int); };");
    CHECK(out == "interface I {\n    void h();\n    int g(int);\n};\n");
}

TEST_CASE("round trip covers the statement and expression forms") {
    roundTrip(
        "typedef int (*Counter)();\n"
        "Counter MakeCounter(int value) { return int (*) () { return value++; }; }\n"
        "class P : implements I {\n"
        "meta public:\n  P& new(int a) { x = a; }\n"
        "protected: int x, y = 2;\n"
        "public: virtual selftype& closer(selftype& p) { return (p.dist() < dist()) ? p : *this; }\n"
        "  final double dist() { return sqrt(x * x + y * y); }\n"
        "  abstract void z();\n"
        "};\n"
        "object O : public P except z; private Q rename a to b {\n"
        "  import M only f; sharing D::A == E::A; friend T.Visit; class N { };\n"
        "};\n"
        "Graphic& g = (rename render to draw) new Graphic1;\n"
        "for (int i = 0; i < 3; i++, j--) if (i == 1) print(\"a\\n\"); else { break; }\n"
        "while (!done && -x >= 2.5e3) x += 1;\n"
        "typecase (p) { case A: print(1); break; case B: default: print(0); }\n"
        "P.ScrollBar.new(1, 2, \"s\");\n"
        "x = y = new Q(1)->m()::k;\n");
}

TEST_CASE("every parseable corpus file round-trips through the printer") {
    int files = 0;
    for (const auto& path : find_corpus_programs(ROM_CORPUS_DIR)) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        auto first = parseText(ss.str());
        if (!first->diags.empty()) continue;
        ++files;
        std::string printed = pretty_print(first->ast);
        auto second = parseText(printed);
        CHECK_MESSAGE(second->diags.empty(), path);
        CHECK_MESSAGE(ast_sexpr(first->ast) == ast_sexpr(second->ast), path);
        CHECK_MESSAGE(pretty_print(second->ast) == printed, path);
    }
    CHECK(files > 40);
}
