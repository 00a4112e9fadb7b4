#include "rom/parser.hpp"

#include <fmt/format.h>

#include <optional>
#include <stdexcept>

namespace rom {

namespace {

struct ParseError {
    SourceLoc loc;
    std::string message;
};

std::string unescape(std::string_view raw) {
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\\' && i + 2 < raw.size()) {
            char n = raw[++i];
            switch (n) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '0': out += '\0'; break;
            default: out += n; break;
            }
        } else {
            out += c;
        }
    }
    return out;
}

bool isPrimKw(Tok t) {
    return t == Tok::KwInt || t == Tok::KwDouble || t == Tok::KwBool || t == Tok::KwString ||
           t == Tok::KwVoid;
}

bool isAccessKw(Tok t) {
    return t == Tok::KwPublic || t == Tok::KwProtected || t == Tok::KwPrivate;
}

Access accessOf(Tok t) {
    switch (t) {
    case Tok::KwProtected: return Access::Protected;
    case Tok::KwPrivate: return Access::Private;
    default: return Access::Public;
    }
}

class Parser {
public:
    Parser(const std::vector<Token>& toks, DiagnosticSink& diags) : toks_(toks), diags_(diags) {}

    ProgramAst program() {
        ProgramAst prog;
        while (!at(Tok::Eof)) {
            const size_t start = pos_;
            try {
                topDecl(prog);
            } catch (const ParseError& e) {
                diags_.error("E-PARSE", e.loc, e.message);
                recover(start);
            }
        }
        return prog;
    }

private:
    const std::vector<Token>& toks_;
    DiagnosticSink& diags_;
    size_t pos_ = 0;

    // -- token helpers -------------------------------------------------------

    const Token& peek(size_t k = 0) const {
        size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    bool at(Tok t, size_t k = 0) const { return peek(k).kind == t; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(Tok t) {
        if (!at(t)) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(std::string_view expected) const {
        throw ParseError{peek().loc, fmt::format("expected {}, found {}", expected, found())};
    }
    std::string found() const {
        const Token& t = peek();
        if (t.kind == Tok::Eof) return "end of input";
        return fmt::format("'{}'", t.text);
    }
    const Token& expect(Tok t) {
        if (!at(t)) fail(tokName(t));
        return next();
    }
    std::string ident() { return std::string(expect(Tok::Ident).text); }

    void recover(size_t start) {
        if (pos_ == start) next();
        while (!at(Tok::Eof)) {
            const Token& prev = toks_[pos_ - 1];
            if (peek().loc.col == 1 && (prev.kind == Tok::Semi || prev.kind == Tok::RBrace)) return;
            next();
        }
    }

    // -- types ---------------------------------------------------------------

    std::vector<std::string> qname() {
        std::vector<std::string> q{ident()};
        while ((at(Tok::Dot) || at(Tok::ColonColon)) && at(Tok::Ident, 1)) {
            next();
            q.push_back(ident());
        }
        return q;
    }

    bool atTypeStart() const {
        return isPrimKw(peek().kind) || at(Tok::KwSelftype) || at(Tok::Ident);
    }

    TypeSyntax baseType() {
        TypeSyntax t;
        t.loc = peek().loc;
        const Tok k = peek().kind;
        if (isPrimKw(k)) {
            next();
            t.kind = TypeSyntax::Kind::Prim;
            switch (k) {
            case Tok::KwInt: t.prim = PrimKind::Int; break;
            case Tok::KwDouble: t.prim = PrimKind::Double; break;
            case Tok::KwBool: t.prim = PrimKind::Bool; break;
            case Tok::KwString: t.prim = PrimKind::String; break;
            default: t.prim = PrimKind::Void; break;
            }
        } else if (accept(Tok::KwSelftype)) {
            t.kind = TypeSyntax::Kind::Selftype;
        } else if (at(Tok::Ident)) {
            t.kind = TypeSyntax::Kind::Named;
            t.qname = qname();
        } else {
            fail("type");
        }
        if (accept(Tok::Amp) || accept(Tok::Star)) t.reference = true;
        return t;
    }

    bool atFunStar() const { return at(Tok::LParen) && at(Tok::Star, 1) && at(Tok::RParen, 2); }

    TypeSyntax type() {
        TypeSyntax t = baseType();
        while (atFunStar() && at(Tok::LParen, 3)) {
            TypeSyntax f;
            f.loc = t.loc;
            f.kind = TypeSyntax::Kind::Function;
            next(), next(), next();
            for (auto& p : params()) f.params.push_back(std::move(p.type));
            f.ret = std::make_shared<TypeSyntax>(std::move(t));
            if (accept(Tok::Amp) || accept(Tok::Star)) f.reference = true;
            t = std::move(f);
        }
        return t;
    }

    /// `( [type [name] {, type [name]}] )`
    std::vector<Param> params() {
        expect(Tok::LParen);
        std::vector<Param> out;
        if (!at(Tok::RParen)) {
            do {
                Param p;
                p.loc = peek().loc;
                p.type = type();
                if (at(Tok::Ident)) p.name = ident();
                out.push_back(std::move(p));
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen);
        return out;
    }

    template <class F>
    bool speculate(F&& f) {
        const size_t save = pos_;
        bool ok = false;
        try {
            ok = f();
        } catch (const ParseError&) {
            ok = false;
        }
        if (!ok) pos_ = save;
        return ok;
    }

    /// type followed by an identifier that starts a declarator
    bool looksLikeVarDecl() {
        const size_t save = pos_;
        bool ok = speculate([&] {
            if (!atTypeStart()) return false;
            type();
            return at(Tok::Ident) && (at(Tok::Assign, 1) || at(Tok::Semi, 1) || at(Tok::Comma, 1));
        });
        pos_ = save;
        return ok;
    }

    bool looksLikeFunctionDecl() {
        const size_t save = pos_;
        bool ok = speculate([&] {
            if (!atTypeStart()) return false;
            type();
            return at(Tok::Ident) && at(Tok::LParen, 1);
        });
        pos_ = save;
        return ok;
    }

    bool looksLikeFunLit() {
        const size_t save = pos_;
        bool ok = speculate([&] {
            baseType();
            return atFunStar();
        });
        pos_ = save;
        return ok;
    }

    // -- declarations ----------------------------------------------------------

    void topDecl(ProgramAst& prog) {
        const SourceLoc loc = peek().loc;
        if (at(Tok::KwInterface)) {
            auto d = interfaceDecl();
            if (d) prog.decls.push_back({std::move(*d), loc});
            return;
        }
        if (at(Tok::KwClass) || at(Tok::KwObject)) {
            auto d = implDecl(false);
            if (d) prog.decls.push_back({std::move(d), loc});
            return;
        }
        if (at(Tok::KwTypedef)) {
            prog.decls.push_back({typedefDecl(), loc});
            return;
        }
        if (accept(Tok::Semi)) return;
        if (looksLikeFunctionDecl()) {
            MethodDecl m = methodAfterModifiers(false);
            if (m.body) prog.decls.push_back({std::move(m), loc});
            return;
        }
        prog.decls.push_back({statement(), loc});
    }

    std::optional<InterfaceDecl> interfaceDecl() {
        InterfaceDecl d;
        d.loc = expect(Tok::KwInterface).loc;
        d.name = ident();
        if (accept(Tok::Semi)) return std::nullopt;
        if (accept(Tok::Colon)) {
            do {
                if (isAccessKw(peek().kind)) next();
                d.parents.push_back(qname());
            } while (accept(Tok::Comma));
        }
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            if (isAccessKw(peek().kind) && at(Tok::Colon, 1)) {
                next(), next();
                continue;
            }
            if (accept(Tok::Semi)) continue;
            if (at(Tok::KwClass) || at(Tok::KwObject)) {
                next();
                const SourceLoc l = peek().loc;
                d.nestedTypes.emplace_back(ident(), l);
                expect(Tok::Semi);
                continue;
            }
            MethodDecl m = methodAfterModifiers(true);
            if (m.body) throw ParseError{m.loc, "interface methods cannot have a body"};
            d.methods.push_back(std::move(m));
        }
        expect(Tok::RBrace);
        accept(Tok::Semi);
        return d;
    }

    TypedefDecl typedefDecl() {
        TypedefDecl d;
        d.loc = expect(Tok::KwTypedef).loc;
        TypeSyntax t = baseType();
        if (at(Tok::LParen) && at(Tok::Star, 1) && at(Tok::Ident, 2)) {
            next(), next();
            d.name = ident();
            expect(Tok::RParen);
            TypeSyntax f;
            f.loc = t.loc;
            f.kind = TypeSyntax::Kind::Function;
            for (auto& p : params()) f.params.push_back(std::move(p.type));
            f.ret = std::make_shared<TypeSyntax>(std::move(t));
            d.type = std::move(f);
        } else {
            while (atFunStar() && at(Tok::LParen, 3)) {
                TypeSyntax f;
                f.loc = t.loc;
                f.kind = TypeSyntax::Kind::Function;
                next(), next(), next();
                for (auto& p : params()) f.params.push_back(std::move(p.type));
                f.ret = std::make_shared<TypeSyntax>(std::move(t));
                t = std::move(f);
            }
            d.type = std::move(t);
            d.name = ident();
        }
        expect(Tok::Semi);
        return d;
    }

    MemberFilter filter() {
        MemberFilter f;
        for (;;) {
            if (accept(Tok::KwOnly)) {
                f.hasOnly = true;
                nameList(f.only);
            } else if (accept(Tok::KwExcept)) {
                f.hasExcept = true;
                nameList(f.except);
            } else if (accept(Tok::KwRename)) {
                do {
                    RenamePair r;
                    r.loc = peek().loc;
                    r.from = ident();
                    expect(Tok::KwTo);
                    r.to = ident();
                    f.renames.push_back(std::move(r));
                } while (at(Tok::Comma) && at(Tok::Ident, 1) && at(Tok::KwTo, 2) && (next(), true));
            } else {
                return f;
            }
        }
    }

    void nameList(std::vector<std::string>& out) {
        out.push_back(ident());
        while (at(Tok::Comma) && at(Tok::Ident, 1)) {
            next();
            out.push_back(ident());
        }
    }

    void clauses(ImplDecl& d) {
        do {
            InheritClause c;
            c.loc = peek().loc;
            if (accept(Tok::KwImplements)) {
                c.kind = InheritClause::Kind::Implements;
                c.qname = qname();
                d.clauses.push_back(std::move(c));
                while (at(Tok::Comma) && at(Tok::Ident, 1)) {
                    next();
                    InheritClause more;
                    more.loc = peek().loc;
                    more.kind = InheritClause::Kind::Implements;
                    more.qname = qname();
                    d.clauses.push_back(std::move(more));
                }
                continue;
            }
            if (accept(Tok::KwPrivate)) c.kind = InheritClause::Kind::Private;
            else if (accept(Tok::KwPublic) || accept(Tok::KwProtected)) c.kind = InheritClause::Kind::Public;
            c.qname = qname();
            c.filter = filter();
            d.clauses.push_back(std::move(c));
        } while ((accept(Tok::Comma) || accept(Tok::Semi)) && !at(Tok::LBrace));
    }

    /// `class|object Name [: clauses] { members } [;]`, or an anonymous object
    /// literal when `anonymous` is set. Forward declarations yield null.
    std::shared_ptr<const ImplDecl> implDecl(bool anonymous) {
        auto d = std::make_shared<ImplDecl>();
        d->loc = peek().loc;
        d->isObject = next().kind == Tok::KwObject;
        d->anonymous = anonymous;
        if (!anonymous) d->name = ident();
        if (accept(Tok::Colon)) clauses(*d);
        if (!anonymous && !at(Tok::LBrace)) {
            accept(Tok::Semi);
            return nullptr;
        }
        expect(Tok::LBrace);
        members(*d);
        expect(Tok::RBrace);
        if (!anonymous) accept(Tok::Semi);
        return d;
    }

    void members(ImplDecl& d) {
        Access access = d.isObject ? Access::Public : Access::Private;
        bool meta = false;
        while (!at(Tok::RBrace) && !at(Tok::Eof)) {
            if (isAccessKw(peek().kind) && at(Tok::Colon, 1)) {
                access = accessOf(next().kind);
                next();
                meta = false;
                continue;
            }
            if (at(Tok::KwMeta) && isAccessKw(peek(1).kind) && at(Tok::Colon, 2)) {
                next();
                access = accessOf(next().kind);
                next();
                meta = true;
                continue;
            }
            if (accept(Tok::Semi)) continue;
            Member m;
            m.access = access;
            m.meta = meta;
            m.loc = peek().loc;
            if (at(Tok::KwClass) || at(Tok::KwObject)) {
                auto nested = implDecl(false);
                if (!nested) continue;
                m.kind = MemberKind::Nested;
                m.body = std::move(nested);
            } else if (accept(Tok::KwImport)) {
                ImportDecl im;
                im.qname = qname();
                im.filter = filter();
                expect(Tok::Semi);
                m.kind = MemberKind::Import;
                m.body = std::move(im);
            } else if (accept(Tok::KwSharing)) {
                SharingDecl s;
                s.left = path();
                expect(Tok::EqEq);
                s.right = path();
                expect(Tok::Semi);
                m.kind = MemberKind::Sharing;
                m.body = std::move(s);
            } else if (accept(Tok::KwFriend)) {
                FriendDecl f;
                accept(Tok::KwClass) || accept(Tok::KwObject);
                f.qname = qname();
                expect(Tok::Semi);
                m.kind = MemberKind::Friend;
                m.body = std::move(f);
            } else if (looksLikeFieldDecl()) {
                TypeSyntax t = type();
                do {
                    FieldDecl f;
                    f.type = t;
                    const SourceLoc nameLoc = peek().loc;
                    f.name = ident();
                    if (accept(Tok::Assign)) f.init = expression();
                    Member fm;
                    fm.kind = MemberKind::Field;
                    fm.access = access;
                    fm.meta = meta;
                    fm.loc = nameLoc;
                    fm.body = std::move(f);
                    d.members.push_back(std::move(fm));
                } while (accept(Tok::Comma));
                expect(Tok::Semi);
                continue;
            } else {
                m.kind = MemberKind::Method;
                MethodDecl md = methodAfterModifiers(false);
                m.loc = md.loc;
                m.body = std::move(md);
            }
            d.members.push_back(std::move(m));
        }
    }

    bool looksLikeFieldDecl() {
        const size_t save = pos_;
        bool ok = speculate([&] {
            if (!atTypeStart()) return false;
            type();
            return at(Tok::Ident) && !at(Tok::LParen, 1) && !at(Tok::Dot, 1);
        });
        pos_ = save;
        return ok;
    }

    std::vector<std::string> path() {
        std::vector<std::string> p{ident()};
        while (accept(Tok::ColonColon) || accept(Tok::Dot)) p.push_back(ident());
        return p;
    }

    /// `[virtual|final|abstract]* type name (params) (body | ;)`; `qualified`
    /// admits interface entries of the form `T.name(...)`.
    MethodDecl methodAfterModifiers(bool qualified) {
        MethodDecl m;
        for (;;) {
            if (accept(Tok::KwVirtual)) m.isVirtual = true;
            else if (accept(Tok::KwFinal)) m.isFinal = true;
            else if (accept(Tok::KwAbstract)) m.isAbstract = true;
            else break;
        }
        m.ret = type();
        m.loc = peek().loc;
        if (qualified && at(Tok::Ident) && at(Tok::Dot, 1)) {
            m.qualifier = ident();
            next();
        }
        if (accept(Tok::KwNew)) m.name = "new";
        else m.name = ident();
        m.params = params();
        if (at(Tok::LBrace)) m.body = block();
        else expect(Tok::Semi);
        return m;
    }

    // -- statements ---------------------------------------------------------------

    std::unique_ptr<BlockStmt> block() {
        auto b = std::make_unique<BlockStmt>(expect(Tok::LBrace).loc);
        while (!at(Tok::RBrace)) {
            if (at(Tok::Eof)) fail("'}'");
            b->stmts.push_back(statement());
        }
        next();
        return b;
    }

    StmtPtr varDecl(bool consumeSemi) {
        auto v = std::make_unique<VarDeclStmt>(peek().loc);
        v->typeSyntax = type();
        do {
            Declarator d;
            d.loc = peek().loc;
            d.name = ident();
            if (accept(Tok::Assign)) d.init = expression();
            v->decls.push_back(std::move(d));
        } while (accept(Tok::Comma));
        if (consumeSemi) expect(Tok::Semi);
        return v;
    }

    StmtPtr statement() {
        const SourceLoc loc = peek().loc;
        switch (peek().kind) {
        case Tok::LBrace: return block();
        case Tok::Semi: next(); return std::make_unique<EmptyStmt>(loc);
        case Tok::KwIf: {
            next();
            auto s = std::make_unique<IfStmt>(loc);
            expect(Tok::LParen);
            s->cond = expression();
            expect(Tok::RParen);
            s->then = statement();
            if (accept(Tok::KwElse)) s->otherwise = statement();
            return s;
        }
        case Tok::KwWhile: {
            next();
            auto s = std::make_unique<WhileStmt>(loc);
            expect(Tok::LParen);
            s->cond = expression();
            expect(Tok::RParen);
            s->body = statement();
            return s;
        }
        case Tok::KwFor: {
            next();
            auto s = std::make_unique<ForStmt>(loc);
            expect(Tok::LParen);
            if (!at(Tok::Semi)) {
                if (looksLikeVarDecl()) {
                    s->init = varDecl(false);
                } else {
                    auto e = std::make_unique<ExprStmt>(peek().loc);
                    e->expr = expression();
                    s->init = std::move(e);
                }
            }
            expect(Tok::Semi);
            if (!at(Tok::Semi)) s->cond = expression();
            expect(Tok::Semi);
            if (!at(Tok::RParen)) {
                do s->step.push_back(expression());
                while (accept(Tok::Comma));
            }
            expect(Tok::RParen);
            s->body = statement();
            return s;
        }
        case Tok::KwReturn: {
            next();
            auto s = std::make_unique<ReturnStmt>(loc);
            if (!at(Tok::Semi)) s->value = expression();
            expect(Tok::Semi);
            return s;
        }
        case Tok::KwBreak:
            next();
            expect(Tok::Semi);
            return std::make_unique<BreakStmt>(loc);
        case Tok::KwPrint: {
            next();
            auto s = std::make_unique<PrintStmt>(loc);
            expect(Tok::LParen);
            s->value = expression();
            expect(Tok::RParen);
            expect(Tok::Semi);
            return s;
        }
        case Tok::KwTypecase: return typecase();
        default: break;
        }
        if (looksLikeVarDecl()) return varDecl(true);
        auto s = std::make_unique<ExprStmt>(loc);
        s->expr = expression();
        expect(Tok::Semi);
        return s;
    }

    StmtPtr typecase() {
        auto s = std::make_unique<TypecaseStmt>(expect(Tok::KwTypecase).loc);
        expect(Tok::LParen);
        s->scrutinee = expression();
        expect(Tok::RParen);
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            TypecaseArm arm;
            arm.loc = peek().loc;
            if (accept(Tok::KwDefault)) {
                arm.isDefault = true;
            } else if (accept(Tok::KwCase)) {
                arm.qname = qname();
            } else {
                fail("'case', 'default' or '}'");
            }
            expect(Tok::Colon);
            while (!at(Tok::KwCase) && !at(Tok::KwDefault) && !at(Tok::RBrace)) {
                if (at(Tok::Eof)) fail("'}'");
                arm.body.push_back(statement());
            }
            s->arms.push_back(std::move(arm));
        }
        next();
        return s;
    }

    // -- expressions -------------------------------------------------------------

    ExprPtr expression() { return assignment(); }

    ExprPtr assignment() {
        ExprPtr lhs = conditional();
        AssignOp op;
        switch (peek().kind) {
        case Tok::Assign: op = AssignOp::Set; break;
        case Tok::PlusAssign: op = AssignOp::Add; break;
        case Tok::MinusAssign: op = AssignOp::Sub; break;
        case Tok::StarAssign: op = AssignOp::Mul; break;
        case Tok::SlashAssign: op = AssignOp::Div; break;
        default: return lhs;
        }
        auto a = std::make_unique<AssignExpr>(next().loc);
        a->op = op;
        a->target = std::move(lhs);
        a->value = assignment();
        return a;
    }

    ExprPtr conditional() {
        ExprPtr c = binary(1);
        if (!at(Tok::Question)) return c;
        auto e = std::make_unique<ConditionalExpr>(next().loc);
        e->cond = std::move(c);
        e->then = assignment();
        expect(Tok::Colon);
        e->otherwise = conditional();
        return e;
    }

    static int precedence(Tok t, BinaryOp& op) {
        switch (t) {
        case Tok::OrOr: op = BinaryOp::Or; return 1;
        case Tok::AndAnd: op = BinaryOp::And; return 2;
        case Tok::EqEq: op = BinaryOp::Eq; return 3;
        case Tok::NotEq: op = BinaryOp::Ne; return 3;
        case Tok::Less: op = BinaryOp::Lt; return 4;
        case Tok::LessEq: op = BinaryOp::Le; return 4;
        case Tok::Greater: op = BinaryOp::Gt; return 4;
        case Tok::GreaterEq: op = BinaryOp::Ge; return 4;
        case Tok::Plus: op = BinaryOp::Add; return 5;
        case Tok::Minus: op = BinaryOp::Sub; return 5;
        case Tok::Star: op = BinaryOp::Mul; return 6;
        case Tok::Slash: op = BinaryOp::Div; return 6;
        case Tok::Percent: op = BinaryOp::Mod; return 6;
        default: return -1;
        }
    }

    ExprPtr binary(int minPrec) {
        ExprPtr lhs = unary();
        for (;;) {
            BinaryOp op;
            int prec = precedence(peek().kind, op);
            if (prec < 0 || prec < minPrec) return lhs;
            auto b = std::make_unique<BinaryExpr>(next().loc);
            b->op = op;
            b->lhs = std::move(lhs);
            b->rhs = binary(prec + 1);
            lhs = std::move(b);
        }
    }

    ExprPtr unary() {
        const SourceLoc loc = peek().loc;
        switch (peek().kind) {
        case Tok::Minus:
        case Tok::Bang: {
            auto u = std::make_unique<UnaryExpr>(loc);
            u->op = next().kind == Tok::Minus ? UnaryOp::Neg : UnaryOp::Not;
            u->operand = unary();
            return u;
        }
        case Tok::Star:
        case Tok::Amp: {
            next();
            auto d = std::make_unique<DerefExpr>(loc);
            d->operand = unary();
            return d;
        }
        case Tok::PlusPlus:
        case Tok::MinusMinus: {
            auto i = std::make_unique<IncDecExpr>(loc);
            i->prefix = true;
            i->increment = next().kind == Tok::PlusPlus;
            i->target = unary();
            return i;
        }
        case Tok::LParen:
            if (at(Tok::KwRename, 1)) {
                next(), next();
                auto r = std::make_unique<RenameCastExpr>(loc);
                do {
                    RenamePair p;
                    p.loc = peek().loc;
                    p.from = ident();
                    expect(Tok::KwTo);
                    p.to = ident();
                    r->renames.push_back(std::move(p));
                } while (accept(Tok::Comma));
                expect(Tok::RParen);
                r->operand = unary();
                return r;
            }
            break;
        default: break;
        }
        return postfix(primary());
    }

    std::vector<ExprPtr> args() {
        expect(Tok::LParen);
        std::vector<ExprPtr> out;
        if (!at(Tok::RParen)) {
            do out.push_back(expression());
            while (accept(Tok::Comma));
        }
        expect(Tok::RParen);
        return out;
    }

    ExprPtr postfix(ExprPtr e) {
        for (;;) {
            const SourceLoc loc = peek().loc;
            if (at(Tok::LParen)) {
                auto c = std::make_unique<CallExpr>(e->loc);
                c->callee = std::move(e);
                c->args = args();
                e = std::move(c);
            } else if (at(Tok::Dot) || at(Tok::Arrow) || at(Tok::ColonColon)) {
                const Tok sep = next().kind;
                auto m = std::make_unique<MemberExpr>(loc);
                m->object = std::move(e);
                m->arrow = sep == Tok::Arrow;
                m->scope = sep == Tok::ColonColon;
                if (accept(Tok::KwNew)) m->name = "new";
                else m->name = ident();
                e = std::move(m);
            } else if (at(Tok::PlusPlus) || at(Tok::MinusMinus)) {
                auto i = std::make_unique<IncDecExpr>(loc);
                i->prefix = false;
                i->increment = next().kind == Tok::PlusPlus;
                i->target = std::move(e);
                e = std::move(i);
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const Token& t = peek();
        const SourceLoc loc = t.loc;
        switch (t.kind) {
        case Tok::IntLit: {
            next();
            auto e = std::make_unique<IntLit>(loc);
            try {
                e->value = std::stoll(std::string(t.text));
            } catch (const std::out_of_range&) {
                throw ParseError{loc, "integer literal out of range"};
            }
            return e;
        }
        case Tok::DoubleLit: {
            next();
            auto e = std::make_unique<DoubleLit>(loc);
            e->spelling = std::string(t.text);
            e->value = std::stod(e->spelling);
            return e;
        }
        case Tok::StringLit: {
            next();
            auto e = std::make_unique<StringLit>(loc);
            e->value = unescape(t.text);
            return e;
        }
        case Tok::KwTrue:
        case Tok::KwFalse: {
            next();
            auto e = std::make_unique<BoolLit>(loc);
            e->value = t.kind == Tok::KwTrue;
            return e;
        }
        case Tok::KwThis: next(); return std::make_unique<ThisExpr>(loc);
        case Tok::KwNew: {
            next();
            auto n = std::make_unique<NewExpr>(loc);
            n->qname = qname();
            if (at(Tok::LParen)) {
                n->hasArgs = true;
                n->args = args();
            }
            return n;
        }
        case Tok::KwObject: {
            auto o = std::make_unique<ObjectLitExpr>(loc);
            o->decl = implDecl(true);
            return o;
        }
        case Tok::LParen: {
            next();
            ExprPtr e = expression();
            expect(Tok::RParen);
            return e;
        }
        default: break;
        }
        if ((isPrimKw(t.kind) || t.kind == Tok::KwSelftype || t.kind == Tok::Ident) &&
            looksLikeFunLit()) {
            auto f = std::make_unique<FunLitExpr>(loc);
            f->ret = baseType();
            next(), next(), next();
            f->params = params();
            f->body = block();
            return f;
        }
        if (t.kind == Tok::Ident) {
            next();
            auto n = std::make_unique<NameExpr>(loc);
            n->name = std::string(t.text);
            return n;
        }
        fail("expression (one of: identifier, literal, '(', 'new', 'this', 'object')");
    }
};

}  // namespace

ProgramAst parse(const std::vector<Token>& tokens, DiagnosticSink& diags) {
    return Parser(tokens, diags).program();
}

ProgramAst parseFiles(const SourceManager& sm, const std::vector<int>& files,
                      DiagnosticSink& diags) {
    ProgramAst prog;
    for (int f : files) {
        auto toks = tokenize(sm, f, diags);
        ProgramAst part = parse(toks, diags);
        for (auto& d : part.decls) prog.decls.push_back(std::move(d));
    }
    return prog;
}

}  // namespace rom
