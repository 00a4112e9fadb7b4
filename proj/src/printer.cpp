#include "rom/parser.hpp"

#include <fmt/format.h>

namespace rom {

namespace {

std::string escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\0': out += "\\0"; break;
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

const char* accessName(Access a) {
    switch (a) {
    case Access::Public: return "public";
    case Access::Protected: return "protected";
    case Access::Private: return "private";
    }
    return "public";
}

class Printer {
public:
    std::string out;

    void program(const ProgramAst& p) {
        for (const auto& d : p.decls) top(d);
    }

private:
    int depth_ = 0;

    void line(std::string_view s) {
        out.append(static_cast<size_t>(depth_) * 4, ' ');
        out += s;
        out += '\n';
    }

    std::string type(const TypeSyntax& t) {
        std::string s;
        switch (t.kind) {
        case TypeSyntax::Kind::Prim: {
            static const char* names[] = {"int", "double", "bool", "string", "void"};
            s = names[static_cast<int>(t.prim)];
            break;
        }
        case TypeSyntax::Kind::Named: s = joinQName(t.qname); break;
        case TypeSyntax::Kind::Selftype: s = "selftype"; break;
        case TypeSyntax::Kind::Function: {
            s = type(*t.ret) + " (*)(";
            for (size_t i = 0; i < t.params.size(); ++i) {
                if (i) s += ", ";
                s += type(t.params[i]);
            }
            s += ")";
            break;
        }
        }
        if (t.reference) s += "&";
        return s;
    }

    std::string params(const std::vector<Param>& ps) {
        std::string s = "(";
        for (size_t i = 0; i < ps.size(); ++i) {
            if (i) s += ", ";
            s += type(ps[i].type);
            if (!ps[i].name.empty()) s += " " + ps[i].name;
        }
        return s + ")";
    }

    std::string filter(const MemberFilter& f) {
        std::string s;
        if (f.hasOnly) s += " only " + joinQName(f.only, ", ");
        if (f.hasExcept) s += " except " + joinQName(f.except, ", ");
        if (!f.renames.empty()) {
            s += " rename ";
            for (size_t i = 0; i < f.renames.size(); ++i) {
                if (i) s += ", ";
                s += f.renames[i].from + " to " + f.renames[i].to;
            }
        }
        return s;
    }

    std::string methodHead(const MethodDecl& m) {
        std::string s;
        if (m.isVirtual) s += "virtual ";
        if (m.isFinal) s += "final ";
        if (m.isAbstract) s += "abstract ";
        s += type(m.ret) + " ";
        if (!m.qualifier.empty()) s += m.qualifier + ".";
        return s + m.name + params(m.params);
    }

    void method(const MethodDecl& m) {
        if (!m.body) {
            line(methodHead(m) + ";");
            return;
        }
        line(methodHead(m) + " {");
        blockBody(*m.body);
        line("}");
    }

    void blockBody(const BlockStmt& b) {
        ++depth_;
        for (const auto& s : b.stmts) stmt(*s);
        --depth_;
    }

    std::string implHead(const ImplDecl& d) {
        std::string s = d.isObject ? "object" : "class";
        if (!d.anonymous) s += " " + d.name;
        for (size_t i = 0; i < d.clauses.size(); ++i) {
            const auto& c = d.clauses[i];
            s += i ? "; " : " : ";
            switch (c.kind) {
            case InheritClause::Kind::Public: s += "public "; break;
            case InheritClause::Kind::Private: s += "private "; break;
            case InheritClause::Kind::Implements: s += "implements "; break;
            }
            s += joinQName(c.qname) + filter(c.filter);
        }
        return s;
    }

    void members(const ImplDecl& d) {
        ++depth_;
        for (const auto& m : d.members) {
            --depth_;
            line(fmt::format("{}{}:", m.meta ? "meta " : "", accessName(m.access)));
            ++depth_;
            switch (m.kind) {
            case MemberKind::Field: {
                const auto& f = m.field();
                std::string s = type(f.type) + " " + f.name;
                if (f.init) s += " = " + expr(*f.init);
                line(s + ";");
                break;
            }
            case MemberKind::Method: method(m.method()); break;
            case MemberKind::Nested: impl(m.nested(), ";"); break;
            case MemberKind::Import:
                line("import " + joinQName(m.import().qname) + filter(m.import().filter) + ";");
                break;
            case MemberKind::Sharing:
                line(fmt::format("sharing {} == {};", joinQName(m.sharing().left, "::"),
                                 joinQName(m.sharing().right, "::")));
                break;
            case MemberKind::Friend: line("friend " + joinQName(m.friendDecl().qname) + ";"); break;
            }
        }
        --depth_;
    }

    void impl(const ImplDecl& d, std::string_view suffix) {
        line(implHead(d) + " {");
        members(d);
        line(fmt::format("}}{}", suffix));
    }

    std::string expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: return std::to_string(as<IntLit>(e).value);
        case ExprKind::DoubleLit: return as<DoubleLit>(e).spelling;
        case ExprKind::BoolLit: return as<BoolLit>(e).value ? "true" : "false";
        case ExprKind::StringLit: return escape(as<StringLit>(e).value);
        case ExprKind::Name: return as<NameExpr>(e).name;
        case ExprKind::This: return "this";
        case ExprKind::Deref: return "(*" + expr(*as<DerefExpr>(e).operand) + ")";
        case ExprKind::Member: {
            const auto& m = as<MemberExpr>(e);
            return expr(*m.object) + (m.arrow ? "->" : m.scope ? "::" : ".") + m.name;
        }
        case ExprKind::Call: {
            const auto& c = as<CallExpr>(e);
            return expr(*c.callee) + args(c.args);
        }
        case ExprKind::New: {
            const auto& n = as<NewExpr>(e);
            std::string s = "(new " + joinQName(n.qname);
            if (n.hasArgs) s += args(n.args);
            return s + ")";
        }
        case ExprKind::Unary: {
            const auto& u = as<UnaryExpr>(e);
            return fmt::format("({}{})", opSpelling(u.op), expr(*u.operand));
        }
        case ExprKind::Binary: {
            const auto& b = as<BinaryExpr>(e);
            return fmt::format("({} {} {})", expr(*b.lhs), opSpelling(b.op), expr(*b.rhs));
        }
        case ExprKind::Assign: {
            const auto& a = as<AssignExpr>(e);
            return fmt::format("({} {} {})", expr(*a.target), opSpelling(a.op), expr(*a.value));
        }
        case ExprKind::IncDec: {
            const auto& i = as<IncDecExpr>(e);
            const char* op = i.increment ? "++" : "--";
            return i.prefix ? fmt::format("({}{})", op, expr(*i.target))
                            : fmt::format("({}{})", expr(*i.target), op);
        }
        case ExprKind::Conditional: {
            const auto& c = as<ConditionalExpr>(e);
            return fmt::format("({} ? {} : {})", expr(*c.cond), expr(*c.then), expr(*c.otherwise));
        }
        case ExprKind::RenameCast: {
            const auto& r = as<RenameCastExpr>(e);
            std::string s = "((rename ";
            for (size_t i = 0; i < r.renames.size(); ++i) {
                if (i) s += ", ";
                s += r.renames[i].from + " to " + r.renames[i].to;
            }
            return s + ") " + expr(*r.operand) + ")";
        }
        case ExprKind::ObjectLit: return nested([&] { impl(*as<ObjectLitExpr>(e).decl, ""); });
        case ExprKind::FunLit: {
            const auto& f = as<FunLitExpr>(e);
            return nested([&] {
                line(type(f.ret) + " (*) " + params(f.params) + " {");
                blockBody(*f.body);
                line("}");
            });
        }
        }
        return "";
    }

    /// Renders a multi-line construct inline: the first line's indentation is
    /// dropped so it can follow other text, and the trailing newline is trimmed.
    template <class F>
    std::string nested(F&& f) {
        std::string saved = std::move(out);
        out.clear();
        ++depth_;
        f();
        --depth_;
        std::string text = std::move(out);
        out = std::move(saved);
        size_t start = text.find_first_not_of(' ');
        text = text.substr(start == std::string::npos ? 0 : start);
        if (!text.empty() && text.back() == '\n') text.pop_back();
        return text;
    }

    std::string args(const std::vector<ExprPtr>& as) {
        std::string s = "(";
        for (size_t i = 0; i < as.size(); ++i) {
            if (i) s += ", ";
            s += expr(*as[i]);
        }
        return s + ")";
    }

    std::string varDecl(const VarDeclStmt& v) {
        std::string s = type(v.typeSyntax) + " ";
        for (size_t i = 0; i < v.decls.size(); ++i) {
            if (i) s += ", ";
            s += v.decls[i].name;
            if (v.decls[i].init) s += " = " + expr(*v.decls[i].init);
        }
        return s;
    }

    /// `head {` ... `}` for block bodies, otherwise the head on its own line
    /// with the statement indented below it.
    void controlled(const std::string& head, const Stmt& body) {
        if (body.kind == StmtKind::Block) {
            line(head + " {");
            blockBody(as<BlockStmt>(body));
            line("}");
        } else {
            line(head);
            ++depth_;
            stmt(body);
            --depth_;
        }
    }

    void stmt(const Stmt& s) {
        switch (s.kind) {
        case StmtKind::Block:
            line("{");
            blockBody(as<BlockStmt>(s));
            line("}");
            break;
        case StmtKind::VarDecl: line(varDecl(as<VarDeclStmt>(s)) + ";"); break;
        case StmtKind::Expr: line(expr(*as<ExprStmt>(s).expr) + ";"); break;
        case StmtKind::If: {
            const auto& i = as<IfStmt>(s);
            controlled("if (" + expr(*i.cond) + ")", *i.then);
            if (i.otherwise) controlled("else", *i.otherwise);
            break;
        }
        case StmtKind::While: {
            const auto& w = as<WhileStmt>(s);
            controlled("while (" + expr(*w.cond) + ")", *w.body);
            break;
        }
        case StmtKind::For: {
            const auto& f = as<ForStmt>(s);
            std::string init;
            if (f.init) {
                init = f.init->kind == StmtKind::VarDecl ? varDecl(as<VarDeclStmt>(*f.init))
                                                          : expr(*as<ExprStmt>(*f.init).expr);
            }
            std::string step;
            for (size_t i = 0; i < f.step.size(); ++i) {
                if (i) step += ", ";
                step += expr(*f.step[i]);
            }
            controlled(fmt::format("for ({}; {}; {})", init, f.cond ? expr(*f.cond) : "", step),
                       *f.body);
            break;
        }
        case StmtKind::Return: {
            const auto& r = as<ReturnStmt>(s);
            line(r.value ? "return " + expr(*r.value) + ";" : "return;");
            break;
        }
        case StmtKind::Break: line("break;"); break;
        case StmtKind::Print: line("print(" + expr(*as<PrintStmt>(s).value) + ");"); break;
        case StmtKind::Typecase: {
            const auto& t = as<TypecaseStmt>(s);
            line("typecase (" + expr(*t.scrutinee) + ") {");
            for (const auto& a : t.arms) {
                line(a.isDefault ? "default:" : "case " + joinQName(a.qname) + ":");
                ++depth_;
                for (const auto& st : a.body) stmt(*st);
                --depth_;
            }
            line("}");
            break;
        }
        case StmtKind::Empty: line(";"); break;
        }
    }

    void top(const TopDecl& d) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, InterfaceDecl>) {
                    std::string head = "interface " + n.name;
                    for (size_t i = 0; i < n.parents.size(); ++i)
                        head += (i ? ", " : " : ") + joinQName(n.parents[i]);
                    line(head + " {");
                    ++depth_;
                    for (const auto& t : n.nestedTypes) line("class " + t.first + ";");
                    for (const auto& m : n.methods) method(m);
                    --depth_;
                    line("};");
                } else if constexpr (std::is_same_v<T, std::shared_ptr<const ImplDecl>>) {
                    impl(*n, ";");
                } else if constexpr (std::is_same_v<T, TypedefDecl>) {
                    if (n.type.kind == TypeSyntax::Kind::Function && !n.type.reference) {
                        std::string ps;
                        for (size_t i = 0; i < n.type.params.size(); ++i) {
                            if (i) ps += ", ";
                            ps += type(n.type.params[i]);
                        }
                        line(fmt::format("typedef {} (*{})({});", type(*n.type.ret), n.name, ps));
                    } else {
                        line("typedef " + type(n.type) + " " + n.name + ";");
                    }
                } else if constexpr (std::is_same_v<T, MethodDecl>) {
                    method(n);
                } else {
                    stmt(*n);
                }
            },
            d.node);
    }
};

}  // namespace

std::string pretty_print(const ProgramAst& ast) {
    Printer p;
    p.program(ast);
    return p.out;
}

}  // namespace rom
