#include "rom/ast.hpp"

#include <fmt/format.h>

namespace rom {

std::string joinQName(const std::vector<std::string>& q, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < q.size(); ++i) {
        if (i) out += sep;
        out += q[i];
    }
    return out;
}

std::vector<ExprPtr> cloneAll(const std::vector<ExprPtr>& v) {
    std::vector<ExprPtr> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(e ? e->clone() : nullptr);
    return out;
}

std::vector<StmtPtr> cloneAll(const std::vector<StmtPtr>& v) {
    std::vector<StmtPtr> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(s ? s->clone() : nullptr);
    return out;
}

namespace {
ExprPtr cl(const ExprPtr& e) { return e ? e->clone() : nullptr; }
StmtPtr cl(const StmtPtr& s) { return s ? s->clone() : nullptr; }
}  // namespace

std::unique_ptr<BlockStmt> cloneBlock(const BlockStmt* b) {
    return b ? std::make_unique<BlockStmt>(*b) : nullptr;
}

DerefExpr::DerefExpr(const DerefExpr& o) : ExprNode(o), operand(cl(o.operand)) {}
MemberExpr::MemberExpr(const MemberExpr& o)
    : ExprNode(o), object(cl(o.object)), name(o.name), arrow(o.arrow), scope(o.scope), res(o.res) {}
CallExpr::CallExpr(const CallExpr& o)
    : ExprNode(o), callee(cl(o.callee)), args(cloneAll(o.args)), info(o.info) {}
NewExpr::NewExpr(const NewExpr& o)
    : ExprNode(o), qname(o.qname), hasArgs(o.hasArgs), args(cloneAll(o.args)), classId(o.classId),
      info(o.info) {}
UnaryExpr::UnaryExpr(const UnaryExpr& o) : ExprNode(o), op(o.op), operand(cl(o.operand)) {}
BinaryExpr::BinaryExpr(const BinaryExpr& o)
    : ExprNode(o), op(o.op), lhs(cl(o.lhs)), rhs(cl(o.rhs)) {}
AssignExpr::AssignExpr(const AssignExpr& o)
    : ExprNode(o), op(o.op), target(cl(o.target)), value(cl(o.value)) {}
IncDecExpr::IncDecExpr(const IncDecExpr& o)
    : ExprNode(o), prefix(o.prefix), increment(o.increment), target(cl(o.target)) {}
ConditionalExpr::ConditionalExpr(const ConditionalExpr& o)
    : ExprNode(o), cond(cl(o.cond)), then(cl(o.then)), otherwise(cl(o.otherwise)) {}
RenameCastExpr::RenameCastExpr(const RenameCastExpr& o)
    : ExprNode(o), renames(o.renames), operand(cl(o.operand)) {}
FunLitExpr::FunLitExpr(const FunLitExpr& o)
    : ExprNode(o), ret(o.ret), params(o.params), body(cloneBlock(o.body.get())), sig(o.sig),
      paramTypes(o.paramTypes) {}

BlockStmt::BlockStmt(const BlockStmt& o)
    : StmtNode(o), stmts(cloneAll(o.stmts)), frameSize(o.frameSize), functionBody(o.functionBody) {}
VarDeclStmt::VarDeclStmt(const VarDeclStmt& o) : StmtNode(o), typeSyntax(o.typeSyntax), type(o.type) {
    for (const auto& d : o.decls) decls.push_back({d.name, d.loc, cl(d.init), d.slot});
}
ExprStmt::ExprStmt(const ExprStmt& o) : StmtNode(o), expr(cl(o.expr)) {}
IfStmt::IfStmt(const IfStmt& o)
    : StmtNode(o), cond(cl(o.cond)), then(cl(o.then)), otherwise(cl(o.otherwise)) {}
WhileStmt::WhileStmt(const WhileStmt& o) : StmtNode(o), cond(cl(o.cond)), body(cl(o.body)) {}
ForStmt::ForStmt(const ForStmt& o)
    : StmtNode(o), init(cl(o.init)), cond(cl(o.cond)), step(cloneAll(o.step)), body(cl(o.body)),
      frameSize(o.frameSize) {}
ReturnStmt::ReturnStmt(const ReturnStmt& o) : StmtNode(o), value(cl(o.value)), expected(o.expected) {}
PrintStmt::PrintStmt(const PrintStmt& o) : StmtNode(o), value(cl(o.value)) {}
TypecaseStmt::TypecaseStmt(const TypecaseStmt& o)
    : StmtNode(o), scrutinee(cl(o.scrutinee)), bindName(o.bindName) {
    for (const auto& a : o.arms)
        arms.push_back({a.isDefault, a.qname, a.loc, cloneAll(a.body), a.implId, a.armType,
                        a.frameSize, a.bindSlot});
}

std::string_view opSpelling(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

std::string_view opSpelling(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    }
    return "?";
}

std::string_view opSpelling(AssignOp op) {
    switch (op) {
    case AssignOp::Set: return "=";
    case AssignOp::Add: return "+=";
    case AssignOp::Sub: return "-=";
    case AssignOp::Mul: return "*=";
    case AssignOp::Div: return "/=";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// S-expression dump

namespace {

class Sexpr {
public:
    std::string out;

    void type(const TypeSyntax& t) {
        switch (t.kind) {
        case TypeSyntax::Kind::Prim: {
            static const char* names[] = {"int", "double", "bool", "string", "void"};
            out += names[static_cast<int>(t.prim)];
            break;
        }
        case TypeSyntax::Kind::Named: out += joinQName(t.qname); break;
        case TypeSyntax::Kind::Selftype: out += "selftype"; break;
        case TypeSyntax::Kind::Function:
            out += "(fn ";
            type(*t.ret);
            for (const auto& p : t.params) {
                out += ' ';
                type(p);
            }
            out += ')';
            break;
        }
        if (t.reference) out += '&';
    }

    void filter(const MemberFilter& f) {
        if (f.hasOnly) out += " (only " + joinQName(f.only, " ") + ")";
        if (f.hasExcept) out += " (except " + joinQName(f.except, " ") + ")";
        for (const auto& r : f.renames) out += " (rename " + r.from + " " + r.to + ")";
    }

    void params(const std::vector<Param>& ps) {
        out += "(params";
        for (const auto& p : ps) {
            out += " (";
            type(p.type);
            if (!p.name.empty()) out += " " + p.name;
            out += ")";
        }
        out += ")";
    }

    void method(const MethodDecl& m) {
        out += "(method ";
        if (m.isVirtual) out += "virtual ";
        if (m.isFinal) out += "final ";
        if (m.isAbstract) out += "abstract ";
        type(m.ret);
        out += " " + (m.qualifier.empty() ? "" : m.qualifier + ".") + m.name + " ";
        params(m.params);
        if (m.body) {
            out += ' ';
            stmt(*m.body);
        }
        out += ")";
    }

    void impl(const ImplDecl& d) {
        out += d.isObject ? "(object " : "(class ";
        out += d.anonymous ? "<anon>" : d.name;
        for (const auto& c : d.clauses) {
            static const char* kinds[] = {"public", "private", "implements"};
            out += fmt::format(" ({} {}", kinds[static_cast<int>(c.kind)], joinQName(c.qname));
            filter(c.filter);
            out += ")";
        }
        for (const auto& m : d.members) {
            static const char* acc[] = {"public", "protected", "private"};
            out += fmt::format(" [{}{}] ", m.meta ? "meta " : "", acc[static_cast<int>(m.access)]);
            switch (m.kind) {
            case MemberKind::Field:
                out += "(field ";
                type(m.field().type);
                out += " " + m.field().name;
                if (m.field().init) {
                    out += ' ';
                    expr(*m.field().init);
                }
                out += ")";
                break;
            case MemberKind::Method: method(m.method()); break;
            case MemberKind::Nested: impl(m.nested()); break;
            case MemberKind::Import:
                out += "(import " + joinQName(m.import().qname);
                filter(m.import().filter);
                out += ")";
                break;
            case MemberKind::Sharing:
                out += fmt::format("(sharing {} {})", joinQName(m.sharing().left, "::"),
                                   joinQName(m.sharing().right, "::"));
                break;
            case MemberKind::Friend: out += "(friend " + joinQName(m.friendDecl().qname) + ")"; break;
            }
        }
        out += ")";
    }

    void expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: out += std::to_string(as<IntLit>(e).value); break;
        case ExprKind::DoubleLit: out += "#d" + as<DoubleLit>(e).spelling; break;
        case ExprKind::BoolLit: out += as<BoolLit>(e).value ? "#t" : "#f"; break;
        case ExprKind::StringLit: out += fmt::format("\"{}\"", as<StringLit>(e).value); break;
        case ExprKind::Name: out += as<NameExpr>(e).name; break;
        case ExprKind::This: out += "this"; break;
        case ExprKind::Deref:
            out += "(deref ";
            expr(*as<DerefExpr>(e).operand);
            out += ")";
            break;
        case ExprKind::Member: {
            const auto& m = as<MemberExpr>(e);
            out += "(. ";
            expr(*m.object);
            out += " " + m.name + ")";
            break;
        }
        case ExprKind::Call: {
            const auto& c = as<CallExpr>(e);
            out += "(call ";
            expr(*c.callee);
            for (const auto& a : c.args) {
                out += ' ';
                expr(*a);
            }
            out += ")";
            break;
        }
        case ExprKind::New: {
            const auto& n = as<NewExpr>(e);
            out += "(new " + joinQName(n.qname);
            for (const auto& a : n.args) {
                out += ' ';
                expr(*a);
            }
            out += ")";
            break;
        }
        case ExprKind::Unary: {
            const auto& u = as<UnaryExpr>(e);
            out += fmt::format("({} ", opSpelling(u.op));
            expr(*u.operand);
            out += ")";
            break;
        }
        case ExprKind::Binary: {
            const auto& b = as<BinaryExpr>(e);
            out += fmt::format("({} ", opSpelling(b.op));
            expr(*b.lhs);
            out += ' ';
            expr(*b.rhs);
            out += ")";
            break;
        }
        case ExprKind::Assign: {
            const auto& a = as<AssignExpr>(e);
            out += fmt::format("({} ", opSpelling(a.op));
            expr(*a.target);
            out += ' ';
            expr(*a.value);
            out += ")";
            break;
        }
        case ExprKind::IncDec: {
            const auto& i = as<IncDecExpr>(e);
            out += fmt::format("({}{} ", i.prefix ? "pre" : "post", i.increment ? "++" : "--");
            expr(*i.target);
            out += ")";
            break;
        }
        case ExprKind::Conditional: {
            const auto& c = as<ConditionalExpr>(e);
            out += "(? ";
            expr(*c.cond);
            out += ' ';
            expr(*c.then);
            out += ' ';
            expr(*c.otherwise);
            out += ")";
            break;
        }
        case ExprKind::RenameCast: {
            const auto& r = as<RenameCastExpr>(e);
            out += "(rename-cast";
            for (const auto& p : r.renames) out += " " + p.from + ">" + p.to;
            out += ' ';
            expr(*r.operand);
            out += ")";
            break;
        }
        case ExprKind::ObjectLit: impl(*as<ObjectLitExpr>(e).decl); break;
        case ExprKind::FunLit: {
            const auto& f = as<FunLitExpr>(e);
            out += "(lambda ";
            type(f.ret);
            out += ' ';
            params(f.params);
            out += ' ';
            stmt(*f.body);
            out += ")";
            break;
        }
        }
    }

    void stmts(const std::vector<StmtPtr>& v) {
        for (const auto& s : v) {
            out += ' ';
            stmt(*s);
        }
    }

    void stmt(const Stmt& s) {
        switch (s.kind) {
        case StmtKind::Block:
            out += "(block";
            stmts(as<BlockStmt>(s).stmts);
            out += ")";
            break;
        case StmtKind::VarDecl: {
            const auto& v = as<VarDeclStmt>(s);
            out += "(var ";
            type(v.typeSyntax);
            for (const auto& d : v.decls) {
                out += " (" + d.name;
                if (d.init) {
                    out += ' ';
                    expr(*d.init);
                }
                out += ")";
            }
            out += ")";
            break;
        }
        case StmtKind::Expr:
            out += "(expr ";
            expr(*as<ExprStmt>(s).expr);
            out += ")";
            break;
        case StmtKind::If: {
            const auto& i = as<IfStmt>(s);
            out += "(if ";
            expr(*i.cond);
            out += ' ';
            stmt(*i.then);
            if (i.otherwise) {
                out += ' ';
                stmt(*i.otherwise);
            }
            out += ")";
            break;
        }
        case StmtKind::While: {
            const auto& w = as<WhileStmt>(s);
            out += "(while ";
            expr(*w.cond);
            out += ' ';
            stmt(*w.body);
            out += ")";
            break;
        }
        case StmtKind::For: {
            const auto& f = as<ForStmt>(s);
            out += "(for ";
            if (f.init) stmt(*f.init);
            else out += "_";
            out += ' ';
            if (f.cond) expr(*f.cond);
            else out += "_";
            out += " (step";
            for (const auto& e : f.step) {
                out += ' ';
                expr(*e);
            }
            out += ") ";
            stmt(*f.body);
            out += ")";
            break;
        }
        case StmtKind::Return:
            out += "(return";
            if (as<ReturnStmt>(s).value) {
                out += ' ';
                expr(*as<ReturnStmt>(s).value);
            }
            out += ")";
            break;
        case StmtKind::Break: out += "(break)"; break;
        case StmtKind::Print:
            out += "(print ";
            expr(*as<PrintStmt>(s).value);
            out += ")";
            break;
        case StmtKind::Typecase: {
            const auto& t = as<TypecaseStmt>(s);
            out += "(typecase ";
            expr(*t.scrutinee);
            for (const auto& a : t.arms) {
                out += a.isDefault ? " (default" : " (case " + joinQName(a.qname);
                stmts(a.body);
                out += ")";
            }
            out += ")";
            break;
        }
        case StmtKind::Empty: out += "(empty)"; break;
        }
    }

    void top(const TopDecl& d) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, InterfaceDecl>) {
                    out += "(interface " + n.name;
                    for (const auto& p : n.parents) out += " (extends " + joinQName(p) + ")";
                    for (const auto& t : n.nestedTypes) out += " (type " + t.first + ")";
                    for (const auto& m : n.methods) {
                        out += ' ';
                        method(m);
                    }
                    out += ")";
                } else if constexpr (std::is_same_v<T, std::shared_ptr<const ImplDecl>>) {
                    impl(*n);
                } else if constexpr (std::is_same_v<T, TypedefDecl>) {
                    out += "(typedef " + n.name + " ";
                    type(n.type);
                    out += ")";
                } else if constexpr (std::is_same_v<T, MethodDecl>) {
                    method(n);
                } else {
                    stmt(*n);
                }
            },
            d.node);
        out += '\n';
    }
};

}  // namespace

std::string ast_sexpr(const ProgramAst& p) {
    Sexpr s;
    for (const auto& d : p.decls) s.top(d);
    return s.out;
}

}  // namespace rom
