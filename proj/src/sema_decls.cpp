#include "sema.hpp"

#include <fmt/format.h>

namespace rom::sema {

std::string familyName(const FamilyKey& k) { return fmt::format("{}/{}", k.name, k.arity); }

Sema::Sema(const ProgramAst& ast, DiagnosticSink& diags, const CheckOptions& opts)
    : ast_(ast), diags_(diags), opts_(opts), prog_(std::make_unique<Program>()), ts_(*prog_) {
    global_.kind = Scope::Kind::Global;
    global_.slots = &prog_->globalFrameSize;
}

void Sema::addDecl(DeclInfo info) {
    auto it = decls_.find(info.id);
    if (it != decls_.end()) {
        error("E-REDECL", info.loc, fmt::format("'{}' is already declared", info.id));
        return;
    }
    declOrder_.push_back(info.id);
    decls_.emplace(info.id, std::move(info));
}

void Sema::collectImpl(const std::shared_ptr<const ImplDecl>& d,
                       const std::vector<std::string>& ctx, Access access, SourceLoc loc) {
    DeclInfo info;
    info.kind = DeclInfo::Kind::Impl;
    info.id = ctx.empty() ? d->name : ctx.back() + "." + d->name;
    info.impl = d.get();
    info.context = ctx;
    info.access = access;
    info.loc = loc;
    std::string id = info.id;
    addDecl(std::move(info));
    std::vector<std::string> inner = ctx;
    inner.push_back(id);
    for (const auto& m : d->members)
        if (m.kind == MemberKind::Nested)
            collectImpl(std::get<std::shared_ptr<const ImplDecl>>(m.body), inner, m.access, m.loc);
}

void Sema::collect() {
    for (const auto& td : ast_.decls) {
        if (auto* i = std::get_if<InterfaceDecl>(&td.node)) {
            DeclInfo info;
            info.kind = DeclInfo::Kind::Interface;
            info.id = i->name;
            info.iface = i;
            info.loc = i->loc;
            addDecl(std::move(info));
        } else if (auto* c = std::get_if<std::shared_ptr<const ImplDecl>>(&td.node)) {
            collectImpl(*c, {}, Access::Public, (*c)->loc);
        } else if (auto* t = std::get_if<TypedefDecl>(&td.node)) {
            DeclInfo info;
            info.kind = DeclInfo::Kind::Typedef;
            info.id = t->name;
            info.td = t;
            info.loc = t->loc;
            addDecl(std::move(info));
        } else if (auto* s = std::get_if<StmtPtr>(&td.node)) {
            prog_->topLevel.push_back((*s)->clone());
        }
    }
}

const DeclInfo* Sema::lookupDecl(const std::vector<std::string>& qname,
                                 const std::vector<std::string>& ctx) const {
    if (qname.empty()) return nullptr;
    std::string base;
    for (size_t i = ctx.size() + 1; i-- > 0;) {
        std::string cand = i == 0 ? qname[0] : ctx[i - 1] + "." + qname[0];
        if (decls_.count(cand)) {
            base = cand;
            break;
        }
    }
    if (base.empty()) return nullptr;
    for (size_t k = 1; k < qname.size(); ++k) {
        base += "." + qname[k];
        if (!decls_.count(base)) return nullptr;
    }
    return &decls_.at(base);
}

Type Sema::declType(const DeclInfo& d) {
    switch (d.kind) {
        case DeclInfo::Kind::Interface: return Type::named(TypeKind::Interface, d.id);
        case DeclInfo::Kind::Impl:
            return Type::named(d.impl->isObject ? TypeKind::Object : TypeKind::Class, d.id);
        case DeclInfo::Kind::Typedef: {
            auto& info = const_cast<DeclInfo&>(d);
            if (info.typedefType) return *info.typedefType;
            if (info.resolving) {
                error("E-CYCLE", d.loc, fmt::format("typedef '{}' refers to itself", d.id));
                return Type::error();
            }
            info.resolving = true;
            Type t = resolveType(d.td->type, {}, false, true);
            info.resolving = false;
            info.typedefType = t;
            return t;
        }
    }
    return Type::error();
}

Type Sema::resolveType(const TypeSyntax& ts, const std::vector<std::string>& ctx, bool allowSelf,
                       bool allowVoid) {
    switch (ts.kind) {
        case TypeSyntax::Kind::Prim:
            switch (ts.prim) {
                case PrimKind::Int: return Type::prim(TypeKind::Int);
                case PrimKind::Double: return Type::prim(TypeKind::Double);
                case PrimKind::Bool: return Type::prim(TypeKind::Bool);
                case PrimKind::String: return Type::prim(TypeKind::String);
                case PrimKind::Void:
                    if (!allowVoid) {
                        error("E-TYPE", ts.loc, "'void' is not a value type");
                        return Type::error();
                    }
                    return Type::prim(TypeKind::Void);
            }
            break;
        case TypeSyntax::Kind::Selftype:
            if (!allowSelf) {
                error("E-TYPE", ts.loc, "'selftype' outside a class or interface");
                return Type::error();
            }
            return Type::selftype();
        case TypeSyntax::Kind::Named: {
            if (const DeclInfo* d = lookupDecl(ts.qname, ctx)) return declType(*d);
            if (ts.qname.size() == 1 && ts.qname[0] == "String") return Type::prim(TypeKind::String);
            error("E-UNDEF", ts.loc, fmt::format("unknown type '{}'", joinQName(ts.qname)));
            return Type::error();
        }
        case TypeSyntax::Kind::Function: {
            std::vector<Type> params;
            for (const auto& p : ts.params) params.push_back(resolveType(p, ctx, allowSelf));
            Type ret = resolveType(*ts.ret, ctx, allowSelf, true);
            return Type::function(std::move(params), std::move(ret));
        }
    }
    return Type::error();
}

MethodSig Sema::resolveSig(const MethodDecl& m, const std::vector<std::string>& ctx,
                           bool allowSelf) {
    MethodSig sig;
    sig.name = m.name;
    for (const auto& p : m.params) sig.params.push_back(resolveType(p.type, ctx, allowSelf));
    sig.ret = resolveType(m.ret, ctx, allowSelf, true);
    sig.isFinal = m.isFinal;
    sig.isAbstract = m.isAbstract || !m.body;
    return sig;
}

void Sema::buildInterface(const std::string& name, std::set<std::string>& active) {
    if (prog_->interfaces.count(name)) return;
    const DeclInfo& info = decls_.at(name);
    const InterfaceDecl& decl = *info.iface;
    if (active.count(name)) {
        error("E-CYCLE", decl.loc, fmt::format("interface '{}' inherits from itself", name));
        return;
    }
    active.insert(name);

    InterfaceDescriptor desc;
    desc.name = name;
    desc.loc = decl.loc;
    std::map<std::string, InterfaceDescriptor> pseudo;

    auto addTo = [&](InterfaceDescriptor& target, const MethodSig& sig, SourceLoc loc, bool own) {
        for (const auto& existing : target.methods) {
            if (existing.name == sig.name && existing.sameParams(sig)) {
                if (own && !(existing.ret == sig.ret))
                    error("E-REDECL", loc,
                          fmt::format("'{}' conflicts with '{}'", sig.str(), existing.str()));
                return;
            }
        }
        target.methods.push_back(sig);
    };
    auto pseudoFor = [&](const std::string& t) -> InterfaceDescriptor& {
        auto& p = pseudo[t];
        if (p.name.empty()) {
            p.name = name + "." + t;
            p.loc = decl.loc;
            p.isNested = true;
            desc.nested.emplace_back(t, p.name);
        }
        return p;
    };

    for (const auto& parentName : decl.parents) {
        const DeclInfo* pd = lookupDecl(parentName, {});
        if (!pd || pd->kind != DeclInfo::Kind::Interface) {
            error("E-UNDEF", decl.loc, fmt::format("unknown interface '{}'", joinQName(parentName)));
            continue;
        }
        buildInterface(pd->id, active);
        auto pit = prog_->interfaces.find(pd->id);
        if (pit == prog_->interfaces.end()) continue;
        const InterfaceDescriptor parent = pit->second;
        for (const auto& m : parent.methods) addTo(desc, m, decl.loc, false);
        for (const auto& [t, pname] : parent.nested) {
            const InterfaceDescriptor pp = prog_->interfaces.at(pname);
            auto& mine = pseudoFor(t);
            for (const auto& m : pp.methods) addTo(mine, m, decl.loc, false);
        }
    }
    for (const auto& [t, loc] : decl.nestedTypes) pseudoFor(t);
    for (const auto& m : decl.methods) {
        MethodSig sig = resolveSig(m, {}, true);
        sig.isAbstract = true;
        if (!m.qualifier.empty()) {
            addTo(pseudoFor(m.qualifier), sig, m.loc, true);
        } else {
            addTo(desc, sig, m.loc, true);
        }
    }
    active.erase(name);
    for (auto& [t, p] : pseudo) prog_->interfaces.emplace(p.name, std::move(p));
    prog_->interfaces.emplace(name, std::move(desc));
}

void Sema::buildInterfaces() {
    std::set<std::string> active;
    for (const auto& id : declOrder_) {
        const DeclInfo& d = decls_.at(id);
        if (d.kind != DeclInfo::Kind::Interface) continue;
        buildInterface(id, active);
        prog_->interfaceOrder.push_back(id);
    }
    // Make sure a cyclic interface still has a (partial) descriptor.
    for (const auto& id : prog_->interfaceOrder)
        if (!prog_->interfaces.count(id)) {
            InterfaceDescriptor empty;
            empty.name = id;
            empty.loc = decls_.at(id).loc;
            prog_->interfaces.emplace(id, std::move(empty));
        }
}

void Sema::collectFunctions() {
    for (const auto& td : ast_.decls) {
        auto* m = std::get_if<MethodDecl>(&td.node);
        if (!m || !m->body) continue;
        GlobalFunction f;
        f.index = static_cast<int>(prog_->functions.size());
        f.sig = resolveSig(*m, {}, false);
        f.decl = m;
        f.body = cloneBlock(m->body.get());
        f.loc = m->loc;
        FamilyKey key{MethodSpace::Instance, -1, m->name, static_cast<int>(m->params.size())};
        auto& fam = prog_->globalFamilies[key];
        fam.key = key;
        fam.overloads.push_back(f.index);
        fam.access.push_back(Access::Public);
        functionsByName_[m->name].push_back(f.index);
        prog_->functions.push_back(std::move(f));
    }
}

std::unique_ptr<Program> Sema::run() {
    collect();
    buildInterfaces();
    collectFunctions();
    for (const auto& id : declOrder_)
        if (decls_.at(id).kind == DeclInfo::Kind::Impl) flatten(id);
    for (const auto& id : prog_->implOrder) validateAllFamilies(*prog_->findImpl(id));
    validateGlobalFamilies();

    // Globals are visible to every function and method body.
    scopes_ = {&global_};
    for (auto& s : prog_->topLevel) {
        if (s->kind != StmtKind::VarDecl) continue;
        auto& v = as<VarDeclStmt>(*s);
        v.type = resolveType(v.typeSyntax, {}, false);
        for (auto& d : v.decls) declareVar(d.name, v.type, d.loc, d.slot);
    }

    std::vector<std::string> named = prog_->implOrder;
    for (const auto& id : named) {
        ImplDescriptor* d = prog_->findImpl(id);
        checkDescriptorBodies(*d, lexicalChain(id));
    }
    checkFunctions();
    checkTopLevel();
    for (const auto& id : prog_->implOrder) checkImplements(*prog_->findImpl(id));
    buildSubtypeGraph();
    checkCompleteness();
    if (opts_.openWorld) diags_.downgrade("E-MM-INCOMPLETE");
    return std::move(prog_);
}

}  // namespace rom::sema

namespace rom {

std::unique_ptr<Program> check_program(const ProgramAst& ast, DiagnosticSink& diags,
                                       const CheckOptions& opts) {
    sema::Sema s(ast, diags, opts);
    auto prog = s.run();
    diags.finalize();
    return prog;
}

}  // namespace rom
