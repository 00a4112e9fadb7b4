#include "sema.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <numeric>

namespace rom::sema {

namespace {

int findRoot(std::vector<int>& uf, int x) {
    while (uf[static_cast<size_t>(x)] != x) {
        uf[static_cast<size_t>(x)] = uf[static_cast<size_t>(uf[static_cast<size_t>(x)])];
        x = uf[static_cast<size_t>(x)];
    }
    return x;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string renameInFilter(const MemberFilter& f, const std::string& name) {
    for (const auto& r : f.renames)
        if (r.from == name) return r.to;
    return name;
}

bool passesFilter(const MemberFilter& f, const std::string& name) {
    if (f.hasOnly && !contains(f.only, name)) return false;
    if (f.hasExcept && contains(f.except, name)) return false;
    return true;
}

struct Entry {
    std::string name;
    int method = -1;
    Access access = Access::Public;
    SourceLoc loc;  // clause or member that brought the entry in
};

}  // namespace

std::vector<std::string> Sema::declContext(const std::string& declId) const {
    auto it = decls_.find(declId);
    if (it == decls_.end()) return {};
    std::vector<std::string> ctx = it->second.context;
    ctx.push_back(declId);
    return ctx;
}

ImplDescriptor* Sema::flatten(const std::string& id) {
    if (ImplDescriptor* d = prog_->findImpl(id)) return d;
    if (building_.count(id)) return nullptr;
    const DeclInfo& info = decls_.at(id);
    auto desc = std::make_unique<ImplDescriptor>();
    desc->id = id;
    desc->isObject = info.impl->isObject;
    desc->anonymous = info.impl->anonymous;
    desc->decl = info.impl;
    desc->context = info.context;
    desc->selfType = Type::named(desc->isObject ? TypeKind::Object : TypeKind::Class, id);
    return flattenDecl(std::move(desc), &info);
}

ImplDescriptor* Sema::flattenDecl(std::unique_ptr<ImplDescriptor> owned, const DeclInfo* info) {
    ImplDescriptor& d = *owned;
    building_.insert(d.id);

    std::vector<std::string> stack;
    buildPart(d, d.decl, d.id, -1, {}, stack);

    std::vector<int> uf(d.parts.size());
    std::iota(uf.begin(), uf.end(), 0);
    applySharing(d, uf);

    std::map<int, int> partitionOfRoot;
    for (auto& p : d.parts) {
        int r = findRoot(uf, p.id);
        auto [it, fresh] = partitionOfRoot.emplace(r, static_cast<int>(d.partitions.size()));
        p.partition = it->second;
        if (!fresh) continue;
        Partition part;
        part.rep = p.id;
        part.declId = p.declId;
        const auto ctx = declContext(p.declId);
        for (const auto& m : p.decl->members) {
            if (m.kind != MemberKind::Field || m.meta) continue;
            const FieldDecl& f = m.field();
            FieldSlot slot;
            slot.name = f.name;
            slot.type = resolveType(f.type, ctx, true);
            if (slot.type.mentionsSelftype()) {
                if (d.isObject) {
                    error("E-SELFTYPE-IN-OBJECT", m.loc, "objects have no selftype");
                    slot.type = Type::error();
                } else {
                    slot.type = subst_selftype(slot.type, d.selfType);
                }
            }
            slot.access = m.access;
            slot.origin = p.declId;
            slot.loc = m.loc;
            if (f.init) slot.init = f.init->clone();
            part.fields.push_back(std::move(slot));
        }
        d.partitions.push_back(std::move(part));
    }

    buildTables(d, 0, uf);

    for (size_t m = 0; m < d.finalImpl.size(); ++m) {
        int cur = static_cast<int>(m);
        while (d.finalImpl[static_cast<size_t>(cur)] != cur) cur = d.finalImpl[static_cast<size_t>(cur)];
        d.finalImpl[m] = cur;
    }

    // Field initialization: ancestors first, in clause order, each partition once.
    std::vector<bool> seen(d.partitions.size(), false);
    std::function<void(int)> order = [&](int p) {
        for (int c : d.parts[static_cast<size_t>(p)].children) order(c);
        int part = d.parts[static_cast<size_t>(p)].partition;
        if (!seen[static_cast<size_t>(part)]) {
            seen[static_cast<size_t>(part)] = true;
            d.initOrder.push_back(part);
        }
    };
    order(0);

    bool selftypeReported = false;
    for (const auto& m : d.methods) {
        if (d.isObject && !selftypeReported && m.decl && m.part != 0) {
            bool mentions = false;
            const auto ctx = declContext(d.parts[static_cast<size_t>(m.part)].declId);
            for (const auto& p : m.decl->params)
                if (p.type.kind == TypeSyntax::Kind::Selftype) mentions = true;
            if (m.decl->ret.kind == TypeSyntax::Kind::Selftype) mentions = true;
            if (mentions) {
                error("E-SELFTYPE-IN-OBJECT", d.decl->loc,
                      fmt::format("object '{}' inherits '{}', which uses selftype", d.id,
                                  m.decl->name));
                selftypeReported = true;
            }
        }
    }
    for (size_t m = 0; m < d.methods.size(); ++m)
        if (d.finalImpl[m] == static_cast<int>(m)) {
            const auto& mi = d.methods[m];
            if (mi.kind == MethodKind::Source && !mi.body) d.abstract = true;
        }

    buildMeta(d);
    collectFriends(d);
    buildFamilies(d);
    buildProvided(d);

    for (const auto& c : d.decl->clauses) {
        if (c.kind != InheritClause::Kind::Implements) continue;
        const DeclInfo* id = lookupDecl(c.qname, d.context);
        if (!id || id->kind != DeclInfo::Kind::Interface) {
            error("E-UNDEF", c.loc, fmt::format("unknown interface '{}'", joinQName(c.qname)));
            continue;
        }
        d.implementsClauses.emplace_back(id->id, c.loc);
    }

    (void)info;
    building_.erase(d.id);
    ImplDescriptor* raw = owned.get();
    prog_->implOrder.push_back(d.id);
    prog_->impls.emplace(d.id, std::move(owned));
    return raw;
}

int Sema::buildPart(ImplDescriptor& d, const ImplDecl* decl, const std::string& declId,
                    int parent, std::vector<std::string> path, std::vector<std::string>& stack) {
    const int id = static_cast<int>(d.parts.size());
    Part p;
    p.id = id;
    p.parent = parent;
    p.path = path;
    p.declId = declId;
    p.decl = decl;
    d.parts.push_back(std::move(p));
    stack.push_back(declId);
    const auto ctx = declContext(declId);
    for (const auto& c : decl->clauses) {
        if (c.kind == InheritClause::Kind::Implements) continue;
        const DeclInfo* pd = lookupDecl(c.qname, ctx);
        if (!pd || pd->kind != DeclInfo::Kind::Impl) {
            error("E-UNDEF", c.loc, fmt::format("unknown class or object '{}'", joinQName(c.qname)));
            continue;
        }
        if (contains(stack, pd->id)) {
            error("E-CYCLE", c.loc, fmt::format("'{}' inherits from itself", pd->id));
            continue;
        }
        std::vector<std::string> childPath = path;
        childPath.push_back(c.qname.back());
        int child = buildPart(d, pd->impl, pd->id, id, childPath, stack);
        d.parts[static_cast<size_t>(id)].children.push_back(child);
        d.parts[static_cast<size_t>(id)].clauses.push_back(&c);
    }
    stack.pop_back();
    return id;
}

void Sema::applySharing(ImplDescriptor& d, std::vector<int>& uf) {
    std::function<void(int, int)> unify = [&](int a, int b) {
        int ra = findRoot(uf, a), rb = findRoot(uf, b);
        if (ra == rb) return;
        uf[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
        const auto& ca = d.parts[static_cast<size_t>(a)].children;
        const auto& cb = d.parts[static_cast<size_t>(b)].children;
        for (size_t i = 0; i < ca.size() && i < cb.size(); ++i) unify(ca[i], cb[i]);
    };
    auto walk = [&](int from, const std::vector<std::string>& path) {
        int cur = from;
        for (const auto& step : path) {
            int next = -1;
            for (int c : d.parts[static_cast<size_t>(cur)].children)
                if (d.parts[static_cast<size_t>(c)].path.back() == step) {
                    next = c;
                    break;
                }
            if (next < 0) return -1;
            cur = next;
        }
        return cur;
    };
    const size_t n = d.parts.size();
    for (size_t p = 0; p < n; ++p) {
        for (const auto& m : d.parts[p].decl->members) {
            if (m.kind != MemberKind::Sharing) continue;
            const SharingDecl& s = m.sharing();
            int a = walk(static_cast<int>(p), s.left);
            int b = walk(static_cast<int>(p), s.right);
            if (a < 0 || b < 0) {
                error("E-SHARE", m.loc,
                      fmt::format("'{}' is not an inheritance path",
                                  joinQName(a < 0 ? s.left : s.right, "::")));
                continue;
            }
            if (d.parts[static_cast<size_t>(a)].declId != d.parts[static_cast<size_t>(b)].declId) {
                error("E-SHARE", m.loc,
                      fmt::format("'{}' and '{}' are copies of different classes ({} and {})",
                                  joinQName(s.left, "::"), joinQName(s.right, "::"),
                                  d.parts[static_cast<size_t>(a)].declId,
                                  d.parts[static_cast<size_t>(b)].declId));
                continue;
            }
            unify(a, b);
        }
    }
}

void Sema::expandImport(ImplDescriptor& d, int part, const ImportDecl& imp, SourceLoc loc,
                        int) {
    const auto ctx = declContext(d.parts[static_cast<size_t>(part)].declId);
    const DeclInfo* cd = lookupDecl(imp.qname, ctx);
    if (!cd || cd->kind != DeclInfo::Kind::Impl || cd->impl->isObject) {
        error("E-UNDEF", loc, fmt::format("unknown class '{}'", joinQName(imp.qname)));
        return;
    }
    ImplDescriptor* c = flatten(cd->id);
    if (!c) {
        error("E-CYCLE", loc, fmt::format("'{}' imports itself", cd->id));
        return;
    }
    if (c->abstract) {
        error("E-IMPORT-ABSTRACT", loc, fmt::format("cannot import abstract class '{}'", c->id));
        return;
    }
    bool hasZeroNew = false;
    if (auto it = c->metaTable.find("new"); it != c->metaTable.end())
        for (int m : it->second)
            if (c->metaMethods[static_cast<size_t>(m)].sig.params.empty()) hasZeroNew = true;
    if (!hasZeroNew) {
        error("E-NEW-NONE", loc,
              fmt::format("imported class '{}' has no zero-argument 'new'", c->id));
        return;
    }

    Partition& partition = d.partitions[static_cast<size_t>(d.parts[static_cast<size_t>(part)].partition)];
    const std::string hidden = "import$" + c->id;
    int fieldIndex = -1;
    for (size_t i = 0; i < partition.fields.size(); ++i)
        if (partition.fields[i].name == hidden) fieldIndex = static_cast<int>(i);
    if (fieldIndex < 0) {
        FieldSlot slot;
        slot.name = hidden;
        slot.type = c->selfType;
        slot.access = Access::Private;
        slot.origin = d.parts[static_cast<size_t>(part)].declId;
        slot.loc = loc;
        slot.importOf = c->id;
        fieldIndex = static_cast<int>(partition.fields.size());
        partition.fields.push_back(std::move(slot));
    }

    for (const auto& name : imp.filter.only)
        if (!c->root().methods.count(name))
            error("E-UNKNOWN-MEMBER", loc, fmt::format("'{}' has no method '{}'", c->id, name));
    for (const auto& name : imp.filter.except)
        if (!c->root().methods.count(name))
            error("E-UNKNOWN-MEMBER", loc, fmt::format("'{}' has no method '{}'", c->id, name));
    for (const auto& r : imp.filter.renames)
        if (!c->root().methods.count(r.from))
            error("E-UNKNOWN-MEMBER", r.loc, fmt::format("'{}' has no method '{}'", c->id, r.from));

    for (const auto& [name, entries] : c->root().methods) {
        if (!passesFilter(imp.filter, name)) continue;
        for (const auto& e : entries) {
            if (e.access == Access::Private) continue;
            const int target = c->resolve(e.method);
            MethodImpl fwd;
            fwd.index = static_cast<int>(d.methods.size());
            fwd.sig = c->methods[static_cast<size_t>(target)].sig;
            fwd.sig.name = renameInFilter(imp.filter, name);
            fwd.sig.access = e.access;
            fwd.sig.isFinal = true;
            fwd.sig.isAbstract = false;
            fwd.origin = c->id;
            fwd.part = part;
            fwd.kind = MethodKind::Forwarder;
            fwd.loc = loc;
            fwd.fwdPartition = d.parts[static_cast<size_t>(part)].partition;
            fwd.fwdField = fieldIndex;
            fwd.fwdImpl = c->id;
            fwd.fwdMethod = target;
            d.methods.push_back(std::move(fwd));
            d.finalImpl.push_back(static_cast<int>(d.finalImpl.size()));
        }
    }
}

void Sema::buildTables(ImplDescriptor& d, int part, const std::vector<int>& uf) {
    (void)uf;
    const std::vector<int> children = d.parts[static_cast<size_t>(part)].children;
    for (int c : children) buildTables(d, c, uf);

    const Part& p = d.parts[static_cast<size_t>(part)];
    const ImplDecl* decl = p.decl;
    const std::string declId = p.declId;
    const auto ctx = declContext(declId);

    std::vector<Entry> own;
    std::vector<bool> ownIsForwarder;
    for (const auto& m : decl->members) {
        if (m.kind != MemberKind::Method || m.meta) continue;
        const MethodDecl& md = m.method();
        MethodImpl mi;
        mi.index = static_cast<int>(d.methods.size());
        MethodSig sig = resolveSig(md, ctx, true);
        if (sig.mentionsSelftype() && d.isObject && part == 0)
            error("E-SELFTYPE-IN-OBJECT", md.loc,
                  fmt::format("'{}' uses selftype, but objects have no selftype", md.name));
        mi.sig = subst_selftype(sig, d.selfType);
        mi.sig.access = m.access;
        mi.origin = declId;
        mi.part = part;
        mi.decl = &md;
        mi.body = md.body ? cloneBlock(md.body.get()) : nullptr;
        mi.loc = md.loc;
        own.push_back({md.name, mi.index, m.access, md.loc});
        ownIsForwarder.push_back(false);
        d.methods.push_back(std::move(mi));
        d.finalImpl.push_back(static_cast<int>(d.finalImpl.size()));
    }
    for (const auto& m : decl->members) {
        if (m.kind != MemberKind::Import) continue;
        const size_t before = d.methods.size();
        expandImport(d, part, m.import(), m.loc, -1);
        for (size_t i = before; i < d.methods.size(); ++i) {
            own.push_back({d.methods[i].sig.name, static_cast<int>(i), d.methods[i].sig.access, m.loc});
            ownIsForwarder.push_back(true);
        }
    }

    auto sigOf = [&](int m) -> const MethodSig& { return d.methods[static_cast<size_t>(m)].sig; };
    auto partitionOf = [&](int m) {
        return d.parts[static_cast<size_t>(d.methods[static_cast<size_t>(m)].part)].partition;
    };

    // Own methods with identical parameter lists.
    std::vector<bool> ownDropped(own.size(), false);
    for (size_t i = 0; i < own.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            if (ownDropped[j] || own[i].name != own[j].name ||
                !sigOf(own[i].method).sameParams(sigOf(own[j].method)))
                continue;
            if (ownIsForwarder[i] || ownIsForwarder[j])
                error("E-NAME-CLASH", own[i].loc,
                      fmt::format("'{}' clashes with an imported method", sigOf(own[i].method).str()));
            else
                error("E-MM-DUP", own[i].loc,
                      fmt::format("'{}' is declared twice", sigOf(own[i].method).str()));
            ownDropped[i] = true;
            break;
        }

    std::vector<Entry> kept;
    for (size_t ci = 0; ci < children.size(); ++ci) {
        const Part& q = d.parts[static_cast<size_t>(children[ci])];
        const InheritClause& cl = *p.clauses[ci];
        const MemberFilter& f = cl.filter;
        // private members are copied but cannot be stolen, excluded or renamed
        auto known = [&](const std::string& n) {
            if (auto it = q.table.methods.find(n); it != q.table.methods.end())
                for (const auto& e : it->second)
                    if (e.access != Access::Private) return true;
            if (auto it = q.table.fields.find(n); it != q.table.fields.end())
                for (const auto& fr : it->second)
                    if (fr.access != Access::Private) return true;
            return false;
        };
        for (const auto& n : f.only)
            if (!known(n))
                error("E-UNKNOWN-MEMBER", cl.loc, fmt::format("'{}' has no member '{}'", q.declId, n));
        for (const auto& n : f.except)
            if (!known(n))
                error("E-UNKNOWN-MEMBER", cl.loc, fmt::format("'{}' has no member '{}'", q.declId, n));
        for (const auto& r : f.renames)
            if (!known(r.from))
                error("E-UNKNOWN-MEMBER", r.loc,
                      fmt::format("'{}' has no member '{}'", q.declId, r.from));

        for (const auto& [name, entries] : q.table.methods) {
            if (!passesFilter(f, name)) continue;
            const std::string newName = renameInFilter(f, name);
            for (const auto& e : entries) {
                if (e.access == Access::Private) continue;
                Entry in{newName, e.method,
                         cl.kind == InheritClause::Kind::Private ? Access::Private : e.access, cl.loc};
                const MethodSig& is = sigOf(in.method);
                bool overridden = false;
                for (size_t oi = 0; oi < own.size(); ++oi) {
                    if (ownDropped[oi] || own[oi].name != newName) continue;
                    const MethodSig& os = sigOf(own[oi].method);
                    if (!os.sameParams(is)) continue;
                    overridden = true;
                    if (ownIsForwarder[oi]) {
                        error("E-NAME-CLASH", own[oi].loc,
                              fmt::format("imported '{}' clashes with inherited '{}'", os.str(),
                                          is.str()));
                    } else if (is.isFinal) {
                        error("E-FINAL-OVERRIDE", own[oi].loc,
                              fmt::format("'{}' overrides a final method of '{}'", os.str(),
                                          d.methods[static_cast<size_t>(in.method)].origin));
                    } else if (!(os.ret == is.ret) && !os.ret.isError() && !is.ret.isError()) {
                        error("E-TYPE", own[oi].loc,
                              fmt::format("'{}' overrides '{}' with a different return type",
                                          os.str(), is.ret.str()));
                    }
                    d.finalImpl[static_cast<size_t>(in.method)] = own[oi].method;
                    break;
                }
                if (overridden) continue;
                bool merged = false;
                for (auto& k : kept) {
                    if (k.name != newName || !sigOf(k.method).sameParams(is)) continue;
                    const auto& km = d.methods[static_cast<size_t>(k.method)];
                    const auto& im = d.methods[static_cast<size_t>(in.method)];
                    const bool sameCode = km.decl == im.decl && km.kind == im.kind &&
                                          km.fwdMethod == im.fwdMethod && km.origin == im.origin;
                    if (sameCode && partitionOf(k.method) == partitionOf(in.method)) {
                        d.finalImpl[static_cast<size_t>(in.method)] = k.method;
                    } else {
                        error("E-NAME-CLASH", in.loc,
                              fmt::format("'{}' is inherited from both '{}' and '{}'", is.str(),
                                          km.origin, im.origin));
                    }
                    merged = true;
                    break;
                }
                if (!merged) kept.push_back(in);
            }
        }
    }

    PartTable table;
    for (size_t i = 0; i < own.size(); ++i)
        if (!ownDropped[i]) table.methods[own[i].name].push_back({own[i].method, own[i].access});
    for (const auto& k : kept) table.methods[k.name].push_back({k.method, k.access});

    // Fields: own ones shadow inherited ones of the same name.
    const int myPartition = p.partition;
    const Partition& mine = d.partitions[static_cast<size_t>(myPartition)];
    if (mine.rep == part || d.partitions[static_cast<size_t>(myPartition)].declId == declId) {
        for (size_t i = 0; i < mine.fields.size(); ++i) {
            const FieldSlot& fs = mine.fields[i];
            if (!fs.importOf.empty()) continue;
            table.fields[fs.name].push_back(
                {part, static_cast<int>(i), fs.access, fs.origin, myPartition});
        }
    }
    for (size_t ci = 0; ci < children.size(); ++ci) {
        const Part& q = d.parts[static_cast<size_t>(children[ci])];
        const InheritClause& cl = *p.clauses[ci];
        for (const auto& [name, refs] : q.table.fields) {
            const std::string newName = renameInFilter(cl.filter, name);
            if (table.fields.count(newName) && table.fields[newName].front().part == part) continue;
            for (const auto& r : refs) {
                if (r.access == Access::Private) continue;
                FieldRef in = r;
                if (cl.kind == InheritClause::Kind::Private) in.access = Access::Private;
                auto& list = table.fields[newName];
                bool dup = false;
                for (const auto& x : list)
                    if (x.partition == in.partition && x.index == in.index) dup = true;
                if (!dup) list.push_back(in);
            }
        }
    }
    d.parts[static_cast<size_t>(part)].table = std::move(table);
}

void Sema::buildMeta(ImplDescriptor& d) {
    for (const auto& part : d.parts) {
        const auto ctx = declContext(part.declId);
        for (const auto& m : part.decl->members) {
            if (!m.meta) continue;
            if (d.isObject) {
                if (part.id == 0)
                    error("E-TYPE", m.loc, "objects have no meta section");
                continue;
            }
            if (m.kind == MemberKind::Field) {
                const FieldDecl& f = m.field();
                if (part.id != 0 && m.access == Access::Private) continue;
                bool exists = false;
                for (const auto& mf : d.metaFields)
                    if (mf.name == f.name) exists = true;
                if (exists) {
                    if (part.id == 0)
                        error("E-REDECL", m.loc, fmt::format("meta field '{}' is already declared", f.name));
                    continue;
                }
                FieldSlot slot;
                slot.name = f.name;
                slot.type = resolveType(f.type, ctx, true);
                if (slot.type.mentionsSelftype()) {
                    error("E-SELFTYPE-META", m.loc, "meta members cannot use selftype");
                    slot.type = Type::error();
                }
                slot.access = m.access;
                slot.origin = part.declId;
                slot.loc = m.loc;
                if (f.init) slot.init = f.init->clone();
                d.metaAccess[f.name] = m.access;
                d.metaFields.push_back(std::move(slot));
            } else if (m.kind == MemberKind::Method) {
                const MethodDecl& md = m.method();
                const bool isNew = md.name == "new";
                if (isNew && part.id != 0) continue;
                if (!isNew && part.id != 0 && m.access == Access::Private) continue;
                MethodSig sig = resolveSig(md, ctx, true);
                sig.access = m.access;
                sig.isMeta = true;
                if (part.id == 0 && sig.mentionsSelftype()) {
                    error("E-SELFTYPE-META", md.loc, "meta methods cannot use selftype");
                    sig = subst_selftype(sig, Type::error());
                }
                if (isNew && !sig.ret.isError() && !(sig.ret == d.selfType)) {
                    error("E-NEW-RET", md.loc,
                          fmt::format("'new' of '{}' must return '{}', not '{}'", d.id, d.id,
                                      sig.ret.str()));
                    sig.ret = d.selfType;
                }
                bool dup = false;
                for (int other : d.metaTable[md.name]) {
                    const auto& om = d.metaMethods[static_cast<size_t>(other)];
                    if (om.sig.sameParams(sig)) {
                        dup = true;
                        if (part.id == 0 && om.part == 0)
                            error("E-MM-DUP", md.loc, fmt::format("'{}' is declared twice", sig.str()));
                    }
                }
                if (dup) continue;
                MethodImpl mi;
                mi.index = static_cast<int>(d.metaMethods.size());
                mi.sig = sig;
                mi.origin = part.declId;
                mi.part = part.id;
                mi.decl = &md;
                mi.body = md.body ? cloneBlock(md.body.get()) : nullptr;
                mi.loc = md.loc;
                mi.isMeta = true;
                mi.isNew = isNew;
                d.metaTable[md.name].push_back(mi.index);
                d.metaMethods.push_back(std::move(mi));
            }
        }
    }
    if (!d.isObject && !d.metaTable.count("new")) {
        MethodImpl mi;
        mi.index = static_cast<int>(d.metaMethods.size());
        mi.sig.name = "new";
        mi.sig.ret = d.selfType;
        mi.sig.isMeta = true;
        mi.origin = d.id;
        mi.kind = MethodKind::DefaultNew;
        mi.loc = d.decl->loc;
        mi.isMeta = true;
        mi.isNew = true;
        d.metaTable["new"].push_back(mi.index);
        d.metaMethods.push_back(std::move(mi));
    }
}

void Sema::collectFriends(ImplDescriptor& d) {
    const auto ctx = declContext(d.id);
    for (const auto& m : d.decl->members) {
        if (m.kind != MemberKind::Friend) continue;
        const auto& q = m.friendDecl().qname;
        if (const DeclInfo* di = lookupDecl(q, ctx); di && di->kind == DeclInfo::Kind::Impl) {
            d.friendImpls.insert(di->id);
            continue;
        }
        if (q.size() >= 2) {
            std::vector<std::string> owner(q.begin(), q.end() - 1);
            if (const DeclInfo* di = lookupDecl(owner, ctx); di && di->kind == DeclInfo::Kind::Impl) {
                d.friendFamilies.emplace(di->id, q.back());
                continue;
            }
        } else if (functionsByName_.count(q[0])) {
            d.friendFamilies.emplace("", q[0]);
            continue;
        }
        error("E-UNDEF", m.loc, fmt::format("unknown friend '{}'", joinQName(q)));
    }
}

void Sema::buildFamilies(ImplDescriptor& d) {
    for (const auto& part : d.parts) {
        for (const auto& [name, entries] : part.table.methods) {
            for (const auto& e : entries) {
                const int target = d.resolve(e.method);
                const int arity = static_cast<int>(d.methods[static_cast<size_t>(target)].sig.params.size());
                FamilyKey key{MethodSpace::Instance, part.id, name, arity};
                Family& f = d.families[key];
                f.key = key;
                f.owner = d.id;
                if (std::find(f.overloads.begin(), f.overloads.end(), target) != f.overloads.end())
                    continue;
                f.overloads.push_back(target);
                f.access.push_back(e.access);
            }
        }
    }
    for (const auto& [name, list] : d.metaTable) {
        for (int m : list) {
            const int arity = static_cast<int>(d.metaMethods[static_cast<size_t>(m)].sig.params.size());
            FamilyKey key{MethodSpace::Meta, -1, name, arity};
            Family& f = d.families[key];
            f.key = key;
            f.owner = d.id;
            f.overloads.push_back(m);
            f.access.push_back(d.metaMethods[static_cast<size_t>(m)].sig.access);
        }
    }
}

void Sema::buildProvided(ImplDescriptor& d) {
    d.provided.self = d.selfType;
    for (const auto& [name, entries] : d.root().methods) {
        for (const auto& e : entries) {
            if (e.access != Access::Public) continue;
            const int target = d.resolve(e.method);
            MethodSig s = d.methods[static_cast<size_t>(target)].sig;
            s.name = name;
            d.provided.methods.push_back(std::move(s));
            d.providedMethods.push_back(target);
        }
    }
    for (const auto& m : d.decl->members) {
        if (m.kind != MemberKind::Nested || m.access != Access::Public) continue;
        const ImplDecl& n = m.nested();
        const std::string id = d.id + "." + n.name;
        d.nested.emplace_back(n.name, id);
        d.provided.nested.emplace_back(
            n.name, Type::named(n.isObject ? TypeKind::Object : TypeKind::Meta, id));
    }
    if (d.isObject) return;
    d.metaProvided.self = Type::named(TypeKind::Meta, d.id);
    for (const auto& mm : d.metaMethods) {
        if (mm.sig.access != Access::Public) continue;
        d.metaProvided.methods.push_back(mm.sig);
        d.metaProvidedMethods.push_back(mm.index);
    }
}

std::string Sema::descriptorIdForLiteral(const ObjectLitExpr& e) {
    int n = ++anonCount_[e.loc];
    std::string base = fmt::format("object@{}:{}", e.loc.line, e.loc.col);
    if (n > 1) base += fmt::format("#{}", n);
    return base;
}

}  // namespace rom::sema
