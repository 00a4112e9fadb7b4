#include "sema.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace rom::sema {

namespace {

std::string joinTypes(const std::vector<Type>& ts) {
    std::string out;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        out += ts[i].str();
    }
    return out;
}

const Type& viewBase(const Type& t) { return t.kind == TypeKind::View ? *t.base : t; }

/// Restores the scope stack and loop depth when a nested body check ends.
struct ScopeGuard {
    std::vector<Scope*>& scopes;
    std::vector<Scope*> saved;
    ScopeGuard(std::vector<Scope*>& s, std::vector<Scope*> replacement)
        : scopes(s), saved(std::move(s)) {
        scopes = std::move(replacement);
    }
    ~ScopeGuard() { scopes = std::move(saved); }
};

}  // namespace

// ---------------------------------------------------------------------------
// Scope helpers

std::vector<Scope*> Sema::lexicalChain(const std::string& declId) {
    std::vector<Scope*> chain{&global_};
    for (const auto& ctx : decls_.at(declId).context) {
        const DeclInfo& d = decls_.at(ctx);
        if (!d.impl || !d.impl->isObject) continue;
        auto s = std::make_unique<Scope>();
        s->kind = Scope::Kind::Object;
        s->objectDecl = d.impl;
        s->objectId = ctx;
        chain.push_back(s.get());
        objectScopes_.push_back(std::move(s));
    }
    return chain;
}

int Sema::localHops(size_t scopeIndex) const {
    int hops = 0;
    for (size_t i = scopeIndex + 1; i < scopes_.size(); ++i)
        if (scopes_[i]->opensFrame()) ++hops;
    return hops;
}

Scope* Sema::innermostActivation() {
    for (size_t i = scopes_.size(); i-- > 0;)
        if (scopes_[i]->kind == Scope::Kind::Activation) return scopes_[i];
    return nullptr;
}

Scope* Sema::innermostSelf(int* hops) {
    int n = 0;
    for (size_t i = scopes_.size(); i-- > 0;) {
        Scope* s = scopes_[i];
        if (s->kind == Scope::Kind::Activation && s->impl) {
            if (hops) *hops = n;
            return s;
        }
    }
    return nullptr;
}

std::vector<std::string> Sema::currentContext() const {
    for (size_t i = scopes_.size(); i-- > 0;)
        if (scopes_[i]->kind == Scope::Kind::Activation) return scopes_[i]->context;
    return {};
}

std::vector<CodeContext> Sema::codeContexts() const {
    std::vector<CodeContext> out;
    for (const Scope* s : scopes_) {
        if (s->kind == Scope::Kind::Activation) {
            if (s->impl) out.push_back({s->impl->id, s->origin, s->methodName});
            else if (!s->methodName.empty()) out.push_back({"", "", s->methodName});
        } else if (s->kind == Scope::Kind::Object) {
            out.push_back({s->objectId, s->objectId, ""});
        }
    }
    for (const auto& c : currentContext()) out.push_back({c, c, ""});
    return out;
}

bool Sema::accessible(Access access, const std::string& origin, const ImplDescriptor& owner,
                      const std::string&) const {
    if (access == Access::Public) return true;
    for (const auto& c : codeContexts()) {
        if (!c.impl.empty() && c.impl == owner.id) return true;
        if (!c.origin.empty() && c.origin == origin) return true;
        if (owner.friendImpls.count(c.impl) || owner.friendImpls.count(c.origin)) return true;
        if (owner.friendFamilies.count({c.impl, c.method})) return true;
        if (access == Access::Protected && !c.impl.empty()) {
            if (const ImplDescriptor* d = prog_->findImpl(c.impl))
                for (const auto& p : d->parts)
                    if (p.declId == origin) return true;
        }
    }
    return false;
}

void Sema::declareVar(const std::string& name, const Type& t, SourceLoc loc, int& slot) {
    Scope* s = scopes_.back();
    if (s->vars.count(name)) {
        error("E-REDECL", loc, fmt::format("'{}' is already declared in this scope", name));
        slot = s->vars[name].slot;
        return;
    }
    slot = s->alloc();
    s->vars[name] = {slot, t};
}

// ---------------------------------------------------------------------------
// Bodies

void Sema::checkMethodBody(ImplDescriptor& d, MethodImpl& m, const std::vector<Scope*>& outer) {
    Scope act;
    act.kind = Scope::Kind::Activation;
    act.impl = &d;
    act.part = m.part;
    act.meta = m.isMeta && !m.isNew;
    act.isNew = m.isNew;
    act.origin = m.origin;
    act.methodName = m.sig.name;
    act.hasRet = true;
    act.ret = m.isNew ? Type::prim(TypeKind::Void) : m.sig.ret;
    act.context = declContext(d.parts[static_cast<size_t>(m.part)].declId);
    act.slots = &m.body->frameSize;
    m.body->functionBody = true;

    std::vector<Scope*> chain = outer;
    chain.push_back(&act);
    ScopeGuard guard(scopes_, chain);
    const int savedBreak = breakDepth_;
    breakDepth_ = 0;
    for (size_t i = 0; i < m.sig.params.size(); ++i) {
        int slot = -1;
        declareVar(m.decl->params[i].name.empty() ? fmt::format("${}", i) : m.decl->params[i].name,
                   m.sig.params[i], m.decl->params[i].loc, slot);
    }
    checkStmts(m.body->stmts);
    breakDepth_ = savedBreak;
}

void Sema::checkDescriptorBodies(ImplDescriptor& d, const std::vector<Scope*>& outer) {
    auto chainFor = [&](const std::string& declId) {
        if (d.anonymous && declId == d.id) return outer;
        return lexicalChain(declId);
    };

    // Inherited code was checked in its own declaration; copies are only
    // re-annotated, unless selftype changes their meaning here.
    auto inherited = [&](const std::string& declId) { return declId != d.id; };
    auto rebinds = [](const MethodDecl* md) {
        if (!md) return false;
        if (md->ret.kind == TypeSyntax::Kind::Selftype) return true;
        for (const auto& p : md->params)
            if (p.type.kind == TypeSyntax::Kind::Selftype) return true;
        return false;
    };

    for (auto& partition : d.partitions) {
        const Part& rep = d.parts[static_cast<size_t>(partition.rep)];
        const int q = inherited(rep.declId) ? 1 : 0;
        quiet_ += q;
        for (auto& f : partition.fields) {
            if (!f.init) continue;
            Scope act;
            act.kind = Scope::Kind::Activation;
            act.impl = &d;
            act.part = rep.id;
            act.origin = rep.declId;
            act.context = declContext(rep.declId);
            ScopeGuard guard(scopes_, [&] {
                auto c = chainFor(rep.declId);
                c.push_back(&act);
                return c;
            }());
            Type t = checkExpr(*f.init);
            checkAssignment(f.type, t, f.init->loc, fmt::format("field '{}'", f.name));
        }
        quiet_ -= q;
    }
    for (auto& m : d.methods) {
        if (m.kind != MethodKind::Source || !m.body) continue;
        const std::string& declId = d.parts[static_cast<size_t>(m.part)].declId;
        const int q = inherited(declId) && !rebinds(m.decl) ? 1 : 0;
        quiet_ += q;
        checkMethodBody(d, m, chainFor(declId));
        quiet_ -= q;
    }
    for (auto& f : d.metaFields) {
        if (!f.init) continue;
        Scope act;
        act.kind = Scope::Kind::Activation;
        act.impl = &d;
        act.meta = true;
        act.origin = f.origin;
        act.context = declContext(f.origin);
        ScopeGuard guard(scopes_, [&] {
            auto c = lexicalChain(f.origin);
            c.push_back(&act);
            return c;
        }());
        Type t = checkExpr(*f.init);
        checkAssignment(f.type, t, f.init->loc, fmt::format("meta field '{}'", f.name));
    }
    for (auto& m : d.metaMethods) {
        if (m.kind != MethodKind::Source || !m.body) continue;
        const int q = inherited(m.origin) ? 1 : 0;
        quiet_ += q;
        checkMethodBody(d, m, lexicalChain(m.origin));
        quiet_ -= q;
    }
}

void Sema::checkFunctions() {
    for (auto& f : prog_->functions) {
        Scope act;
        act.kind = Scope::Kind::Activation;
        act.methodName = f.sig.name;
        act.hasRet = true;
        act.ret = f.sig.ret;
        act.slots = &f.body->frameSize;
        f.body->functionBody = true;
        ScopeGuard guard(scopes_, {&global_, &act});
        breakDepth_ = 0;
        for (size_t i = 0; i < f.sig.params.size(); ++i) {
            int slot = -1;
            declareVar(f.decl->params[i].name.empty() ? fmt::format("${}", i) : f.decl->params[i].name,
                       f.sig.params[i], f.decl->params[i].loc, slot);
        }
        checkStmts(f.body->stmts);
    }
}

void Sema::checkTopLevel() {
    scopes_ = {&global_};
    breakDepth_ = 0;
    for (auto& s : prog_->topLevel) {
        if (s->kind == StmtKind::VarDecl) {
            auto& v = as<VarDeclStmt>(*s);
            for (auto& d : v.decls) {
                if (!d.init) continue;
                Type t = checkExpr(*d.init);
                checkAssignment(v.type, t, d.init->loc, fmt::format("'{}'", d.name));
            }
            continue;
        }
        checkStmt(*s);
    }
}

// ---------------------------------------------------------------------------
// Statements

void Sema::checkStmts(std::vector<StmtPtr>& v) {
    for (auto& s : v) checkStmt(*s);
}

void Sema::checkBlock(BlockStmt& b) {
    if (b.functionBody) {
        checkStmts(b.stmts);
        return;
    }
    Scope s;
    s.kind = Scope::Kind::Block;
    s.slots = &b.frameSize;
    b.frameSize = 0;
    scopes_.push_back(&s);
    checkStmts(b.stmts);
    scopes_.pop_back();
}

void Sema::checkStmt(Stmt& st) {
    switch (st.kind) {
        case StmtKind::Block: checkBlock(as<BlockStmt>(st)); break;
        case StmtKind::VarDecl: {
            auto& v = as<VarDeclStmt>(st);
            Scope* self = innermostSelf(nullptr);
            const bool allowSelf = self && !self->impl->isObject;
            v.type = resolveType(v.typeSyntax, currentContext(), allowSelf);
            if (v.type.mentionsSelftype()) v.type = subst_selftype(v.type, self->impl->selfType);
            for (auto& d : v.decls) {
                if (d.init) {
                    Type t = checkExpr(*d.init);
                    checkAssignment(v.type, t, d.init->loc, fmt::format("'{}'", d.name));
                }
                declareVar(d.name, v.type, d.loc, d.slot);
            }
            break;
        }
        case StmtKind::Expr: checkExpr(*as<ExprStmt>(st).expr); break;
        case StmtKind::If: {
            auto& s = as<IfStmt>(st);
            Type c = checkExpr(*s.cond);
            if (!c.isError() && c.kind != TypeKind::Bool)
                error("E-TYPE", s.cond->loc, fmt::format("condition has type '{}', not 'bool'", c.str()));
            checkStmt(*s.then);
            if (s.otherwise) checkStmt(*s.otherwise);
            break;
        }
        case StmtKind::While: {
            auto& s = as<WhileStmt>(st);
            Type c = checkExpr(*s.cond);
            if (!c.isError() && c.kind != TypeKind::Bool)
                error("E-TYPE", s.cond->loc, fmt::format("condition has type '{}', not 'bool'", c.str()));
            ++breakDepth_;
            checkStmt(*s.body);
            --breakDepth_;
            break;
        }
        case StmtKind::For: {
            auto& s = as<ForStmt>(st);
            Scope sc;
            sc.kind = Scope::Kind::Block;
            s.frameSize = 0;
            sc.slots = &s.frameSize;
            scopes_.push_back(&sc);
            if (s.init) checkStmt(*s.init);
            if (s.cond) {
                Type c = checkExpr(*s.cond);
                if (!c.isError() && c.kind != TypeKind::Bool)
                    error("E-TYPE", s.cond->loc,
                          fmt::format("condition has type '{}', not 'bool'", c.str()));
            }
            for (auto& e : s.step) checkExpr(*e);
            ++breakDepth_;
            checkStmt(*s.body);
            --breakDepth_;
            scopes_.pop_back();
            break;
        }
        case StmtKind::Return: {
            auto& s = as<ReturnStmt>(st);
            Scope* act = innermostActivation();
            if (!act || !act->hasRet) {
                error("E-TYPE", s.loc, "'return' outside a function");
                if (s.value) checkExpr(*s.value);
                break;
            }
            s.expected = act->ret;
            if (s.value) {
                Type t = checkExpr(*s.value);
                if (act->ret.kind == TypeKind::Void)
                    error("E-TYPE", s.value->loc, "a void method cannot return a value");
                else
                    checkAssignment(act->ret, t, s.value->loc, "return value");
            } else if (act->ret.kind != TypeKind::Void && !act->ret.isError()) {
                error("E-TYPE", s.loc, fmt::format("missing return value of type '{}'", act->ret.str()));
            }
            break;
        }
        case StmtKind::Break:
            if (breakDepth_ == 0) error("E-TYPE", st.loc, "'break' outside a loop or typecase");
            break;
        case StmtKind::Print: {
            auto& s = as<PrintStmt>(st);
            Type t = checkExpr(*s.value);
            if (!t.isError() && !t.isPrimitive())
                error("E-TYPE", s.value->loc, fmt::format("cannot print a value of type '{}'", t.str()));
            break;
        }
        case StmtKind::Typecase: checkTypecase(as<TypecaseStmt>(st)); break;
        case StmtKind::Empty: break;
    }
}

void Sema::checkTypecase(TypecaseStmt& s) {
    Type st = checkExpr(*s.scrutinee);
    const bool isIface = st.kind == TypeKind::Interface;
    if (!st.isError() && !isIface)
        error("E-TYPECASE-SCRUT", s.scrutinee->loc,
              fmt::format("typecase needs an interface-typed value, not '{}'", st.str()));
    if (s.scrutinee->kind == ExprKind::Name &&
        as<NameExpr>(*s.scrutinee).res.kind == Resolution::Kind::Local)
        s.bindName = as<NameExpr>(*s.scrutinee).name;
    std::set<std::string> seen;
    for (auto& arm : s.arms) {
        if (!arm.isDefault) {
            const DeclInfo* d = lookupDecl(arm.qname, currentContext());
            if (!d || d->kind != DeclInfo::Kind::Impl) {
                error("E-UNDEF", arm.loc,
                      fmt::format("'{}' is not a class or object", joinQName(arm.qname)));
                arm.armType = Type::error();
            } else {
                arm.implId = d->id;
                arm.armType = declType(*d);
                if (!seen.insert(d->id).second)
                    warning("E-TYPECASE-DEAD", arm.loc,
                                   fmt::format("'{}' is already handled by an earlier arm", d->id));
                else if (isIface && !ts_.conforms(arm.armType, st.name))
                    warning("E-TYPECASE-DEAD", arm.loc,
                                   fmt::format("'{}' does not conform to '{}'; the arm is unreachable",
                                               d->id, st.name));
            }
        }
        Scope sc;
        sc.kind = Scope::Kind::Block;
        arm.frameSize = 0;
        sc.slots = &arm.frameSize;
        scopes_.push_back(&sc);
        if (!s.bindName.empty() && !arm.isDefault && !arm.armType.isError())
            declareVar(s.bindName, arm.armType, arm.loc, arm.bindSlot);
        ++breakDepth_;
        checkStmts(arm.body);
        --breakDepth_;
        scopes_.pop_back();
    }
}

// ---------------------------------------------------------------------------
// Assignment compatibility

bool Sema::checkAssignment(const Type& to, const Type& from, SourceLoc loc, const std::string& what) {
    if (to.isError() || from.isError()) return true;
    if (from.kind == TypeKind::Void) {
        error("E-TYPE", loc, fmt::format("{} has no value", what));
        return false;
    }
    if (ts_.assignable(from, to)) return true;
    if (to.kind == TypeKind::Interface) {
        if (from.kind == TypeKind::Interface) {
            error("E-CONFORM", loc,
                  fmt::format("{}: interface '{}' does not provide everything '{}' requires", what,
                              from.name, to.name));
            return false;
        }
        if (from.isImpl() || from.kind == TypeKind::Meta || from.kind == TypeKind::View) {
            auto why = ts_.explain(from, to.name);
            std::string msg = fmt::format("{}: '{}' does not conform to '{}'", what, from.str(), to.name);
            for (size_t i = 0; i < why.size(); ++i) msg += (i ? "; " : ": ") + why[i];
            error("E-CONFORM", loc, msg);
            return false;
        }
    }
    if (to.isImpl() && from.isImpl()) {
        error("E-CLASS-ASSIGN", loc,
              fmt::format("{}: '{}' is not '{}'; inheritance does not make subtypes", what,
                          from.str(), to.str()));
        return false;
    }
    error("E-TYPE", loc, fmt::format("{}: expected '{}', found '{}'", what, to.str(), from.str()));
    return false;
}

// ---------------------------------------------------------------------------
// Expressions

Type Sema::checkExpr(Expr& e) {
    e.type = checkExprInner(e);
    return e.type;
}

Type Sema::checkExprInner(Expr& e) {
    switch (e.kind) {
        case ExprKind::IntLit: return Type::prim(TypeKind::Int);
        case ExprKind::DoubleLit: return Type::prim(TypeKind::Double);
        case ExprKind::BoolLit: return Type::prim(TypeKind::Bool);
        case ExprKind::StringLit: return Type::prim(TypeKind::String);
        case ExprKind::Name: return checkName(as<NameExpr>(e));
        case ExprKind::This: {
            int hops = 0;
            Scope* s = innermostSelf(&hops);
            if (!s) {
                error("E-TYPE", e.loc, "'this' outside a method");
                return Type::error();
            }
            if (s->meta) {
                error("E-TYPE", e.loc, "'this' inside a meta method");
                return Type::error();
            }
            as<ThisExpr>(e).hops = hops;
            return s->impl->selfType;
        }
        case ExprKind::Deref: return checkExpr(*as<DerefExpr>(e).operand);
        case ExprKind::Member: return checkMember(as<MemberExpr>(e));
        case ExprKind::Call: return checkCall(as<CallExpr>(e));
        case ExprKind::New: return checkNew(as<NewExpr>(e));
        case ExprKind::Unary: {
            auto& u = as<UnaryExpr>(e);
            Type t = checkExpr(*u.operand);
            if (t.isError()) return t;
            if (u.op == UnaryOp::Neg) {
                if (t.isNumeric()) return t;
                error("E-TYPE", e.loc, fmt::format("cannot negate a value of type '{}'", t.str()));
                return Type::error();
            }
            if (t.kind == TypeKind::Bool) return t;
            error("E-TYPE", e.loc, fmt::format("'!' needs a bool, found '{}'", t.str()));
            return Type::error();
        }
        case ExprKind::Binary: return checkBinary(as<BinaryExpr>(e));
        case ExprKind::Assign: return checkAssign(as<AssignExpr>(e));
        case ExprKind::IncDec: {
            auto& x = as<IncDecExpr>(e);
            Type t = checkExpr(*x.target);
            if (!checkLvalue(*x.target)) return Type::error();
            if (t.isError()) return t;
            if (!t.isNumeric()) {
                error("E-TYPE", e.loc, fmt::format("cannot increment a value of type '{}'", t.str()));
                return Type::error();
            }
            return t;
        }
        case ExprKind::Conditional: return checkConditional(as<ConditionalExpr>(e));
        case ExprKind::RenameCast: return checkRenameCast(as<RenameCastExpr>(e));
        case ExprKind::ObjectLit: return checkObjectLit(as<ObjectLitExpr>(e));
        case ExprKind::FunLit: return checkFunLit(as<FunLitExpr>(e));
    }
    return Type::error();
}

Type Sema::checkName(NameExpr& e) {
    int selfCount = 0;
    for (size_t i = scopes_.size(); i-- > 0;) {
        Scope& s = *scopes_[i];
        if (auto it = s.vars.find(e.name); it != s.vars.end()) {
            e.res.kind = Resolution::Kind::Local;
            e.res.hops = localHops(i);
            e.res.index = it->second.slot;
            return it->second.type;
        }
        if (s.kind == Scope::Kind::Activation && s.impl) {
            ImplDescriptor& d = *s.impl;
            if (!s.meta) {
                const PartTable& t = d.parts[static_cast<size_t>(s.part)].table;
                if (auto it = t.fields.find(e.name); it != t.fields.end() && !it->second.empty()) {
                    if (it->second.size() > 1) {
                        error("E-NAME-CLASH", e.loc,
                              fmt::format("'{}' is ambiguous: it is inherited more than once", e.name));
                        return Type::error();
                    }
                    const FieldRef& r = it->second.front();
                    e.res.kind = Resolution::Kind::Field;
                    e.res.hops = selfCount;
                    e.res.partition = r.partition;
                    e.res.index = r.index;
                    return d.partitions[static_cast<size_t>(r.partition)].fields[static_cast<size_t>(r.index)].type;
                }
            }
            for (size_t k = 0; k < d.metaFields.size(); ++k) {
                if (d.metaFields[k].name != e.name) continue;
                e.res.kind = Resolution::Kind::MetaField;
                e.res.owner = d.id;
                e.res.index = static_cast<int>(k);
                return d.metaFields[k].type;
            }
            ++selfCount;
        }
        if (s.kind == Scope::Kind::Object) {
            ImplDescriptor* o = prog_->findImpl(s.objectId);
            if (o) {
                const PartTable& t = o->root();
                if (auto it = t.fields.find(e.name); it != t.fields.end() && !it->second.empty()) {
                    if (it->second.size() > 1) {
                        error("E-NAME-CLASH", e.loc,
                              fmt::format("'{}' is ambiguous: it is inherited more than once", e.name));
                        return Type::error();
                    }
                    const FieldRef& r = it->second.front();
                    e.res.kind = Resolution::Kind::SingletonField;
                    e.res.owner = o->id;
                    e.res.partition = r.partition;
                    e.res.index = r.index;
                    return o->partitions[static_cast<size_t>(r.partition)].fields[static_cast<size_t>(r.index)].type;
                }
            }
        }
    }
    if (const DeclInfo* d = lookupDecl({e.name}, currentContext())) {
        if (d->kind == DeclInfo::Kind::Impl) {
            ImplDescriptor* impl = prog_->findImpl(d->id);
            if (d->impl->isObject) {
                if (impl && impl->abstract) {
                    error("E-ABSTRACT", e.loc,
                          fmt::format("abstract object '{}' can only be inherited from", d->id));
                    return Type::error();
                }
                e.res.kind = Resolution::Kind::Singleton;
                e.res.owner = d->id;
                return Type::named(TypeKind::Object, d->id);
            }
            e.res.kind = Resolution::Kind::Metaclass;
            e.res.owner = d->id;
            return Type::named(TypeKind::Meta, d->id);
        }
        error("E-TYPE", e.loc, fmt::format("'{}' is a type, not a value", e.name));
        return Type::error();
    }
    if (functionsByName_.count(e.name)) {
        error("E-TYPE", e.loc, fmt::format("function '{}' can only be called", e.name));
        return Type::error();
    }
    error("E-UNDEF", e.loc, fmt::format("unknown name '{}'", e.name));
    return Type::error();
}

Type Sema::checkMember(MemberExpr& e) {
    Type ot = checkExpr(*e.object);
    if (ot.isError()) return ot;
    const Type& base = viewBase(ot);
    if (base.isImpl()) {
        ImplDescriptor* d = prog_->findImpl(base.name);
        const PartTable& t = d->root();
        if (auto it = t.fields.find(e.name); it != t.fields.end() && !it->second.empty()) {
            if (it->second.size() > 1) {
                error("E-NAME-CLASH", e.loc,
                      fmt::format("'{}' is ambiguous in '{}'", e.name, d->id));
                return Type::error();
            }
            const FieldRef& r = it->second.front();
            if (!accessible(r.access, r.origin, *d, e.name))
                error("E-ACCESS", e.loc, fmt::format("field '{}' of '{}' is not accessible here", e.name, d->id));
            e.res.kind = MemberRes::Kind::Field;
            e.res.partition = r.partition;
            e.res.index = r.index;
            return d->partitions[static_cast<size_t>(r.partition)].fields[static_cast<size_t>(r.index)].type;
        }
        for (const auto& m : d->decl->members) {
            if (m.kind != MemberKind::Nested || m.nested().name != e.name) continue;
            const std::string id = d->id + "." + e.name;
            if (!accessible(m.access, d->id, *d, e.name))
                error("E-ACCESS", e.loc, fmt::format("'{}' is not exported by '{}'", e.name, d->id));
            e.res.kind = MemberRes::Kind::NestedClass;
            e.res.owner = id;
            return Type::named(m.nested().isObject ? TypeKind::Object : TypeKind::Meta, id);
        }
        if (t.methods.count(e.name)) {
            error("E-TYPE", e.loc, fmt::format("method '{}' must be called", e.name));
            return Type::error();
        }
        error("E-UNDEF", e.loc, fmt::format("'{}' has no member '{}'", d->id, e.name));
        return Type::error();
    }
    if (base.kind == TypeKind::Meta) {
        ImplDescriptor* d = prog_->findImpl(base.name);
        for (size_t k = 0; k < d->metaFields.size(); ++k) {
            const FieldSlot& f = d->metaFields[k];
            if (f.name != e.name) continue;
            if (!accessible(f.access, f.origin, *d, e.name))
                error("E-ACCESS", e.loc, fmt::format("meta field '{}' of '{}' is not accessible here", e.name, d->id));
            e.res.kind = MemberRes::Kind::MetaField;
            e.res.owner = d->id;
            e.res.index = static_cast<int>(k);
            return f.type;
        }
        error("E-UNDEF", e.loc, fmt::format("class '{}' has no meta field '{}'", d->id, e.name));
        return Type::error();
    }
    if (base.kind == TypeKind::Interface) {
        const InterfaceDescriptor* id = prog_->findInterface(base.name);
        for (const auto& [n, pseudo] : id->nested) {
            if (n != e.name) continue;
            e.res.kind = MemberRes::Kind::NestedSlot;
            e.res.owner = pseudo;
            return Type::named(TypeKind::Interface, pseudo);
        }
        error("E-UNDEF", e.loc, fmt::format("interface '{}' exports no type '{}'", base.name, e.name));
        return Type::error();
    }
    error("E-TYPE", e.loc, fmt::format("a value of type '{}' has no members", ot.str()));
    return Type::error();
}

bool Sema::checkLvalue(Expr& e) {
    if (e.type.isError()) return true;
    switch (e.kind) {
        case ExprKind::Name: {
            auto k = as<NameExpr>(e).res.kind;
            if (k == Resolution::Kind::Local || k == Resolution::Kind::Field ||
                k == Resolution::Kind::MetaField || k == Resolution::Kind::SingletonField)
                return true;
            break;
        }
        case ExprKind::Member: {
            auto k = as<MemberExpr>(e).res.kind;
            if (k == MemberRes::Kind::Field || k == MemberRes::Kind::MetaField) return true;
            break;
        }
        case ExprKind::Deref: return checkLvalue(*as<DerefExpr>(e).operand);
        default: break;
    }
    error("E-TYPE", e.loc, "expression cannot be assigned to");
    return false;
}

Type Sema::checkAssign(AssignExpr& e) {
    Type t = checkExpr(*e.target);
    Type v = checkExpr(*e.value);
    if (!checkLvalue(*e.target)) return Type::error();
    if (t.isError() || v.isError()) return t;
    if (e.op == AssignOp::Set) {
        checkAssignment(t, v, e.value->loc, "assignment");
        return t;
    }
    const bool strCat = e.op == AssignOp::Add && t.kind == TypeKind::String && v.isPrimitive();
    if (!strCat && !(t.isNumeric() && v.isNumeric() && (t.kind == TypeKind::Double || v.kind == TypeKind::Int))) {
        error("E-TYPE", e.loc,
              fmt::format("'{}' cannot combine '{}' with '{}'", opSpelling(e.op), t.str(), v.str()));
        return Type::error();
    }
    return t;
}

Type Sema::checkBinary(BinaryExpr& e) {
    Type a = checkExpr(*e.lhs);
    Type b = checkExpr(*e.rhs);
    if (a.isError() || b.isError()) return Type::error();
    auto bad = [&] {
        error("E-TYPE", e.loc,
              fmt::format("'{}' cannot be applied to '{}' and '{}'", opSpelling(e.op), a.str(), b.str()));
        return Type::error();
    };
    auto arith = [&]() -> Type {
        if (!a.isNumeric() || !b.isNumeric()) return bad();
        return a.kind == TypeKind::Double || b.kind == TypeKind::Double ? Type::prim(TypeKind::Double)
                                                                         : Type::prim(TypeKind::Int);
    };
    switch (e.op) {
        case BinaryOp::Add:
            if ((a.kind == TypeKind::String && b.isPrimitive()) ||
                (b.kind == TypeKind::String && a.isPrimitive()))
                return Type::prim(TypeKind::String);
            return arith();
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Div: return arith();
        case BinaryOp::Mod:
            if (a.kind != TypeKind::Int || b.kind != TypeKind::Int) return bad();
            return a;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
            if ((a.isNumeric() && b.isNumeric()) ||
                (a.kind == TypeKind::String && b.kind == TypeKind::String))
                return Type::prim(TypeKind::Bool);
            return bad();
        case BinaryOp::Eq:
        case BinaryOp::Ne:
            if ((a.isNumeric() && b.isNumeric()) || (a.isPrimitive() && a == b) ||
                ((a.isReference() || a.kind == TypeKind::Null) &&
                 (b.isReference() || b.kind == TypeKind::Null)))
                return Type::prim(TypeKind::Bool);
            return bad();
        case BinaryOp::And:
        case BinaryOp::Or:
            if (a.kind != TypeKind::Bool || b.kind != TypeKind::Bool) return bad();
            return a;
    }
    return bad();
}

Type Sema::checkConditional(ConditionalExpr& e) {
    Type c = checkExpr(*e.cond);
    Type a = checkExpr(*e.then);
    Type b = checkExpr(*e.otherwise);
    if (!c.isError() && c.kind != TypeKind::Bool)
        error("E-TYPE", e.cond->loc, fmt::format("condition has type '{}', not 'bool'", c.str()));
    if (a.isError() || b.isError()) return Type::error();
    if (ts_.sameType(a, b)) return a;
    if (a.isNumeric() && b.isNumeric()) return Type::prim(TypeKind::Double);
    if (a.kind == TypeKind::Interface && ts_.assignable(b, a)) return a;
    if (b.kind == TypeKind::Interface && ts_.assignable(a, b)) return b;
    error("E-TYPE", e.loc,
          fmt::format("branches have incompatible types '{}' and '{}'", a.str(), b.str()));
    return Type::error();
}

Type Sema::checkRenameCast(RenameCastExpr& e) {
    Type t = checkExpr(*e.operand);
    if (t.isError()) return t;
    if (!t.isImpl() && t.kind != TypeKind::Meta) {
        error("E-RENAME", e.loc,
              fmt::format("only a class instance or object can be renamed, not '{}'", t.str()));
        return Type::error();
    }
    const ProvidedSet* ps = prog_->provided(t);
    std::set<std::string> names;
    if (ps)
        for (const auto& m : ps->methods) names.insert(m.name);
    RenameMap map;
    std::set<std::string> targets, sources;
    bool ok = true;
    for (const auto& r : e.renames) {
        if (!names.count(r.from)) {
            error("E-RENAME", r.loc, fmt::format("'{}' has no public method '{}'", t.str(), r.from));
            ok = false;
        }
        if (!sources.insert(r.from).second || !targets.insert(r.to).second) {
            error("E-RENAME", r.loc, fmt::format("rename '{} to {}' is not one-to-one", r.from, r.to));
            ok = false;
        }
        map.emplace_back(r.from, r.to);
    }
    for (const auto& r : e.renames)
        if (names.count(r.to) && !sources.count(r.to)) {
            error("E-RENAME", r.loc,
                  fmt::format("renamed '{}' collides with the existing method '{}'", r.from, r.to));
            ok = false;
        }
    if (!ok) return Type::error();
    return Type::view(t, normalizeRenames(std::move(map)));
}

Type Sema::checkObjectLit(ObjectLitExpr& e) {
    std::string id = descriptorIdForLiteral(e);
    while (decls_.count(id)) id = descriptorIdForLiteral(e);
    DeclInfo info;
    info.kind = DeclInfo::Kind::Impl;
    info.id = id;
    info.impl = e.decl.get();
    info.context = currentContext();
    info.loc = e.loc;
    decls_.emplace(id, std::move(info));
    ImplDescriptor* d = flatten(id);
    if (!d) return Type::error();
    validateAllFamilies(*d);
    e.descriptorId = id;
    std::vector<Scope*> outer = scopes_;
    const int savedBreak = breakDepth_;
    checkDescriptorBodies(*d, outer);
    breakDepth_ = savedBreak;
    if (d->abstract) {
        error("E-ABSTRACT", e.loc, "an object literal must implement all of its methods");
        return Type::error();
    }
    return d->selfType;
}

Type Sema::checkFunLit(FunLitExpr& e) {
    std::vector<std::string> ctx = currentContext();
    Type ret = resolveType(e.ret, ctx, false, true);
    e.paramTypes.clear();
    for (const auto& p : e.params) e.paramTypes.push_back(resolveType(p.type, ctx, false));
    e.sig = Type::function(e.paramTypes, ret);

    Scope act;
    act.kind = Scope::Kind::Activation;
    act.hasRet = true;
    act.ret = ret;
    act.context = ctx;
    act.slots = &e.body->frameSize;
    e.body->functionBody = true;
    e.body->frameSize = 0;
    scopes_.push_back(&act);
    const int savedBreak = breakDepth_;
    breakDepth_ = 0;
    for (size_t i = 0; i < e.params.size(); ++i) {
        int slot = -1;
        declareVar(e.params[i].name.empty() ? fmt::format("${}", i) : e.params[i].name,
                   e.paramTypes[i], e.params[i].loc, slot);
    }
    checkStmts(e.body->stmts);
    breakDepth_ = savedBreak;
    scopes_.pop_back();
    return e.sig;
}

// ---------------------------------------------------------------------------
// Calls

const std::vector<MethodImpl>* Sema::familyMethods(const Family& f) const {
    if (f.owner.empty()) return nullptr;
    const ImplDescriptor* d = prog_->findImpl(f.owner);
    return f.key.space == MethodSpace::Meta ? &d->metaMethods : &d->methods;
}

const MethodSig& Sema::overloadSig(const Family& f, int overload) const {
    if (f.owner.empty()) return prog_->functions[static_cast<size_t>(overload)].sig;
    return (*familyMethods(f))[static_cast<size_t>(overload)].sig;
}

bool Sema::resolveFamilyCall(const Family* fam, const std::string& display,
                             std::vector<ExprPtr>& args, CallInfo& info, SourceLoc loc,
                             const std::string& noMatchCode) {
    std::vector<Type> at;
    for (auto& a : args) at.push_back(checkExpr(*a));
    info.family = fam->key;
    info.owner = fam->owner;
    info.result = fam->ret;
    info.dispatched = fam->dispatched;
    for (const auto& t : at)
        if (t.isError()) return false;
    if (!fam->valid) return false;
    const MethodSig& first = overloadSig(*fam, fam->overloads[0]);
    info.argTypes = first.params;

    bool anyDispatched = false, allStatic = true;
    for (size_t i = 0; i < at.size(); ++i) {
        if (!fam->dispatched[i]) continue;
        anyDispatched = true;
        if (!viewBase(at[i]).isImpl()) allStatic = false;
    }

    auto nondispatchedOk = [&](const MethodSig& sig, bool report) {
        bool ok = true;
        for (size_t i = 0; i < at.size(); ++i) {
            if (fam->dispatched[i]) continue;
            if (report)
                ok = checkAssignment(sig.params[i], at[i], args[i]->loc,
                                     fmt::format("argument {} of '{}'", i + 1, display)) && ok;
            else if (!ts_.assignable(at[i], sig.params[i]))
                ok = false;
        }
        return ok;
    };

    auto describe = [&] { return fmt::format("{}({})", display, joinTypes(at)); };

    if (!anyDispatched) {
        info.staticMethod = fam->overloads[0];
        info.result = first.ret;
        return nondispatchedOk(first, true);
    }
    if (allStatic) {
        for (size_t o = 0; o < fam->overloads.size(); ++o) {
            const MethodSig& sig = overloadSig(*fam, fam->overloads[o]);
            bool match = true;
            for (size_t i = 0; i < at.size() && match; ++i)
                if (fam->dispatched[i] && !(viewBase(at[i]) == sig.params[i])) match = false;
            if (!match) continue;
            if (!nondispatchedOk(sig, false)) continue;
            info.staticMethod = fam->overloads[o];
            info.argTypes = sig.params;
            info.result = sig.ret;
            return true;
        }
        error(noMatchCode, loc, fmt::format("no overload matches {}", describe()));
        return false;
    }
    // Dynamic: dispatched positions hold interface references.
    DynamicSite site;
    site.family = fam;
    site.display = display;
    site.loc = loc;
    bool ok = true;
    for (size_t i = 0; i < at.size(); ++i) {
        if (!fam->dispatched[i]) continue;
        const Type& t = viewBase(at[i]);
        if (!t.isImpl() && t.kind != TypeKind::Interface) {
            error("E-TYPE", args[i]->loc,
                  fmt::format("argument {} of '{}' must be a class or interface reference, found '{}'",
                              i + 1, display, at[i].str()));
            ok = false;
        }
        site.argTypes.push_back(t);
    }
    ok = nondispatchedOk(first, true) && ok;
    site.quiet = quiet_ > 0;
    if (ok) sites_.push_back(std::move(site));
    info.staticMethod = -1;
    return ok;
}

bool Sema::interfaceCall(const std::string& iface, const std::string& name,
                         std::vector<ExprPtr>& args, CallInfo& info, SourceLoc loc) {
    std::vector<Type> at;
    for (auto& a : args) at.push_back(checkExpr(*a));
    const InterfaceDescriptor* id = prog_->findInterface(iface);
    info.target = CallInfo::Target::Method;
    info.receiverIsInterface = true;
    info.iface = iface;
    const Type self = Type::named(TypeKind::Interface, iface);
    std::vector<int> candidates;
    for (size_t i = 0; i < id->methods.size(); ++i)
        if (id->methods[i].name == name && id->methods[i].params.size() == args.size())
            candidates.push_back(static_cast<int>(i));
    if (candidates.empty()) {
        error("E-UNDEF", loc,
              fmt::format("interface '{}' has no method '{}' taking {} argument(s)", iface, name,
                          args.size()));
        return false;
    }
    for (const auto& t : at)
        if (t.isError()) return false;
    for (int c : candidates) {
        const MethodSig& sig = id->methods[static_cast<size_t>(c)];
        bool match = true;
        for (size_t i = 0; i < at.size() && match; ++i)
            if (sig.params[i].mentionsSelftype() || !ts_.assignable(at[i], sig.params[i])) match = false;
        if (!match) continue;
        info.ifaceEntry = c;
        info.argTypes = sig.params;
        info.result = subst_selftype(sig.ret, self);
        return true;
    }
    const MethodSig& sig = id->methods[static_cast<size_t>(candidates[0])];
    if (sig.mentionsSelftype() && candidates.size() == 1) {
        bool selfParam = false;
        for (const auto& p : sig.params)
            if (p.mentionsSelftype()) selfParam = true;
        if (selfParam) {
            error("E-TYPE", loc,
                  fmt::format("'{}.{}' takes a selftype argument and cannot be called through an "
                              "interface reference",
                              iface, name));
            return false;
        }
    }
    if (candidates.size() == 1) {
        bool ok = true;
        for (size_t i = 0; i < at.size(); ++i)
            ok = checkAssignment(sig.params[i], at[i], args[i]->loc,
                                 fmt::format("argument {} of '{}.{}'", i + 1, iface, name)) && ok;
        return false;
    }
    error("E-TYPE", loc, fmt::format("no method '{}.{}' accepts ({})", iface, name, joinTypes(at)));
    return false;
}

Type Sema::checkCall(CallExpr& e) {
    CallInfo& info = e.info;
    const int argc = static_cast<int>(e.args.size());

    auto closureCall = [&](const Type& ft) -> Type {
        std::vector<Type> at;
        for (auto& a : e.args) at.push_back(checkExpr(*a));
        if (ft.isError()) return ft;
        if (ft.kind != TypeKind::Function) {
            error("E-TYPE", e.callee->loc, fmt::format("a value of type '{}' cannot be called", ft.str()));
            return Type::error();
        }
        info.target = CallInfo::Target::Closure;
        info.argTypes = ft.params;
        info.result = *ft.ret;
        if (ft.params.size() != at.size()) {
            error("E-TYPE", e.loc, fmt::format("function expects {} argument(s), got {}",
                                               ft.params.size(), at.size()));
            return *ft.ret;
        }
        for (size_t i = 0; i < at.size(); ++i)
            checkAssignment(ft.params[i], at[i], e.args[i]->loc, fmt::format("argument {}", i + 1));
        return *ft.ret;
    };
    auto noArity = [&](const std::string& what) {
        for (auto& a : e.args) checkExpr(*a);
        error("E-TYPE", e.loc, fmt::format("'{}' does not take {} argument(s)", what, argc));
        return Type::error();
    };

    if (e.callee->kind == ExprKind::Name) {
        auto& n = as<NameExpr>(*e.callee);
        int selfCount = 0;
        for (size_t i = scopes_.size(); i-- > 0;) {
            Scope& s = *scopes_[i];
            if (s.vars.count(n.name)) {
                Type ft = checkExpr(n);
                return closureCall(ft);
            }
            if (s.kind == Scope::Kind::Activation && s.impl) {
                ImplDescriptor& d = *s.impl;
                if (!s.meta) {
                    const PartTable& t = d.parts[static_cast<size_t>(s.part)].table;
                    if (t.methods.count(n.name)) {
                        const Family* f = d.family({MethodSpace::Instance, s.part, n.name, argc});
                        if (!f) return noArity(n.name);
                        info.target = CallInfo::Target::ImplicitMethod;
                        info.hops = selfCount;
                        resolveFamilyCall(f, d.id + "." + n.name, e.args, info, e.loc, "E-TYPE");
                        return info.result;
                    }
                    if (auto it = t.fields.find(n.name); it != t.fields.end()) {
                        Type ft = checkExpr(n);
                        return closureCall(ft);
                    }
                }
                if (s.meta || s.isNew) {
                    if (d.metaTable.count(n.name) && n.name != "new") {
                        const Family* f = d.family({MethodSpace::Meta, -1, n.name, argc});
                        if (!f) return noArity(n.name);
                        if (s.meta) {
                            info.target = CallInfo::Target::ImplicitMethod;
                            info.hops = selfCount;
                        } else {
                            info.target = CallInfo::Target::SingletonMethod;
                        }
                        info.owner = d.id;
                        resolveFamilyCall(f, d.id + "." + n.name, e.args, info, e.loc, "E-TYPE");
                        info.owner = d.id;
                        return info.result;
                    }
                }
                ++selfCount;
            }
            if (s.kind == Scope::Kind::Object) {
                ImplDescriptor* o = prog_->findImpl(s.objectId);
                if (o && o->root().methods.count(n.name)) {
                    const Family* f = o->family({MethodSpace::Instance, 0, n.name, argc});
                    if (!f) return noArity(n.name);
                    info.target = CallInfo::Target::SingletonMethod;
                    resolveFamilyCall(f, o->id + "." + n.name, e.args, info, e.loc, "E-TYPE");
                    return info.result;
                }
            }
        }
        if (functionsByName_.count(n.name)) {
            const Family* f = prog_->globalFamily({MethodSpace::Instance, -1, n.name, argc});
            if (!f) return noArity(n.name);
            info.target = CallInfo::Target::GlobalFunction;
            resolveFamilyCall(f, n.name, e.args, info, e.loc, "E-TYPE");
            return info.result;
        }
        if (n.name == "sqrt") {
            if (argc != 1) return noArity(n.name);
            Type t = checkExpr(*e.args[0]);
            info.target = CallInfo::Target::Builtin;
            info.owner = "sqrt";
            info.argTypes = {Type::prim(TypeKind::Double)};
            info.result = Type::prim(TypeKind::Double);
            if (!t.isError() && !t.isNumeric())
                error("E-TYPE", e.args[0]->loc, fmt::format("sqrt needs a number, found '{}'", t.str()));
            return info.result;
        }
        Type ft = checkExpr(n);
        if (ft.isError()) {
            for (auto& a : e.args) checkExpr(*a);
            return ft;
        }
        return closureCall(ft);
    }

    if (e.callee->kind == ExprKind::Member) {
        auto& m = as<MemberExpr>(*e.callee);
        Type rt = checkExpr(*m.object);
        if (rt.isError()) {
            for (auto& a : e.args) checkExpr(*a);
            return rt;
        }
        std::string name = m.name;
        Type base = rt;
        if (rt.kind == TypeKind::View) {
            base = *rt.base;
            bool renamed = false;
            for (const auto& [from, to] : rt.renames) {
                if (to == name) {
                    name = from;
                    renamed = true;
                } else if (from == name && !renamed) {
                    for (auto& a : e.args) checkExpr(*a);
                    error("E-UNDEF", m.loc, fmt::format("'{}' was renamed away", name));
                    return Type::error();
                }
            }
        }
        info.target = CallInfo::Target::Method;
        if (base.isImpl()) {
            ImplDescriptor* d = prog_->findImpl(base.name);
            const PartTable& t = d->root();
            if (!t.methods.count(name)) {
                if (t.fields.count(name)) return closureCall(checkMember(m));
                for (auto& a : e.args) checkExpr(*a);
                error("E-UNDEF", m.loc, fmt::format("'{}' has no method '{}'", d->id, name));
                return Type::error();
            }
            const Family* f = d->family({MethodSpace::Instance, 0, name, argc});
            if (!f) return noArity(d->id + "." + name);
            resolveFamilyCall(f, d->id + "." + name, e.args, info, e.loc, "E-TYPE");
            for (size_t o = 0; o < f->overloads.size(); ++o) {
                if (info.staticMethod >= 0 && f->overloads[o] != info.staticMethod) continue;
                const MethodImpl& mi = d->methods[static_cast<size_t>(f->overloads[o])];
                if (!accessible(f->access[o], mi.origin, *d, name)) {
                    error("E-ACCESS", m.loc,
                          fmt::format("'{}' of '{}' is not accessible here", mi.sig.str(), d->id));
                    break;
                }
            }
            return info.result;
        }
        if (base.kind == TypeKind::Meta) {
            ImplDescriptor* d = prog_->findImpl(base.name);
            if (name == "new" && d->abstract) {
                for (auto& a : e.args) checkExpr(*a);
                error("E-ABSTRACT", m.loc, fmt::format("cannot instantiate abstract class '{}'", d->id));
                return Type::error();
            }
            if (!d->metaTable.count(name)) {
                for (auto& a : e.args) checkExpr(*a);
                error("E-UNDEF", m.loc, fmt::format("class '{}' has no meta method '{}'", d->id, name));
                return Type::error();
            }
            const Family* f = d->family({MethodSpace::Meta, -1, name, argc});
            if (!f) {
                if (name == "new") {
                    for (auto& a : e.args) checkExpr(*a);
                    error("E-NEW-NONE", e.loc,
                          fmt::format("'{}' has no 'new' taking {} argument(s)", d->id, argc));
                    return Type::error();
                }
                return noArity(d->id + "." + name);
            }
            resolveFamilyCall(f, d->id + "." + name, e.args, info, e.loc,
                              name == "new" ? "E-NEW-NONE" : "E-TYPE");
            for (size_t o = 0; o < f->overloads.size(); ++o) {
                if (info.staticMethod >= 0 && f->overloads[o] != info.staticMethod) continue;
                const MethodImpl& mi = d->metaMethods[static_cast<size_t>(f->overloads[o])];
                if (!accessible(f->access[o], mi.origin, *d, name)) {
                    error("E-ACCESS", m.loc,
                          fmt::format("meta method '{}' of '{}' is not accessible here", mi.sig.str(), d->id));
                    break;
                }
            }
            return info.result;
        }
        if (base.kind == TypeKind::Interface) {
            interfaceCall(base.name, name, e.args, info, e.loc);
            return info.result.kind == TypeKind::Error && info.ifaceEntry < 0 ? Type::error() : info.result;
        }
        for (auto& a : e.args) checkExpr(*a);
        error("E-TYPE", m.loc, fmt::format("a value of type '{}' has no methods", rt.str()));
        return Type::error();
    }

    return closureCall(checkExpr(*e.callee));
}

Type Sema::checkNew(NewExpr& e) {
    const DeclInfo* d = lookupDecl(e.qname, currentContext());
    auto fail = [&](std::string code, std::string msg) {
        for (auto& a : e.args) checkExpr(*a);
        error(code, e.loc, std::move(msg));
        return Type::error();
    };
    if (!d || d->kind != DeclInfo::Kind::Impl)
        return fail("E-UNDEF", fmt::format("unknown class '{}'", joinQName(e.qname)));
    if (d->impl->isObject)
        return fail("E-TYPE", fmt::format("'{}' is an object and cannot be instantiated", d->id));
    ImplDescriptor* c = prog_->findImpl(d->id);
    if (!c) return Type::error();
    if (c->abstract)
        return fail("E-ABSTRACT", fmt::format("cannot instantiate abstract class '{}'", c->id));
    const int argc = static_cast<int>(e.args.size());
    const Family* f = c->family({MethodSpace::Meta, -1, "new", argc});
    if (!f)
        return fail("E-NEW-NONE", fmt::format("'{}' has no 'new' taking {} argument(s)", c->id, argc));
    e.classId = c->id;
    e.info.target = CallInfo::Target::Method;
    resolveFamilyCall(f, c->id + ".new", e.args, e.info, e.loc, "E-NEW-NONE");
    for (size_t o = 0; o < f->overloads.size(); ++o) {
        if (e.info.staticMethod >= 0 && f->overloads[o] != e.info.staticMethod) continue;
        const MethodImpl& mi = c->metaMethods[static_cast<size_t>(f->overloads[o])];
        if (!accessible(f->access[o], mi.origin, *c, "new")) {
            error("E-ACCESS", e.loc, fmt::format("'new' of '{}' is not accessible here", c->id));
            break;
        }
    }
    return c->selfType;
}

}  // namespace rom::sema
