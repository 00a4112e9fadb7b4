#include "rom/typesys.hpp"

#include <fmt/format.h>

namespace rom {

std::string renamedName(const RenameMap& renames, const std::string& name) {
    for (const auto& [from, to] : renames)
        if (from == name) return to;
    return name;
}

namespace {

std::string implKey(const Type& t) {
    if (t.kind == TypeKind::View) return t.str();
    return fmt::format("{}:{}", static_cast<int>(t.kind), t.name);
}

const Type& viewBase(const Type& t) { return t.kind == TypeKind::View ? *t.base : t; }

const RenameMap& viewRenames(const Type& t) {
    static const RenameMap none;
    return t.kind == TypeKind::View ? t.renames : none;
}

}  // namespace

// Every false result is memoized, a true result only when nothing else is
// under examination: a true result computed under an assumption may depend on it.
template <class F>
bool TypeSystem::coinductive(std::map<Key, bool>& memo, std::set<Key>& active, const Key& key,
                             F&& compute) {
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (active.count(key)) return true;
    active.insert(key);
    ++depth_;
    bool result = compute();
    --depth_;
    active.erase(key);
    if (!result || depth_ == 0) memo[key] = result;
    return result;
}

void TypeSystem::clear() {
    conformsMemo_.clear();
    subtypeMemo_.clear();
}

bool TypeSystem::sameType(const Type& a, const Type& b) {
    if (a.kind == TypeKind::Interface && b.kind == TypeKind::Interface) {
        if (a.name == b.name) return true;
        return interfaceSubtype(a.name, b.name) && interfaceSubtype(b.name, a.name);
    }
    if (a.kind == TypeKind::Function && b.kind == TypeKind::Function) {
        if (a.params.size() != b.params.size()) return false;
        for (size_t i = 0; i < a.params.size(); ++i)
            if (!sameType(a.params[i], b.params[i])) return false;
        return sameType(*a.ret, *b.ret);
    }
    return a == b;
}

bool TypeSystem::matchParam(const Type& p, const Type& r, const Type& self) {
    if (r.kind == TypeKind::Selftype) return p.kind == TypeKind::Selftype || p == self;
    if (p.kind == TypeKind::Selftype) return false;
    return sameType(p, r);
}

bool TypeSystem::matchRet(const Type& p, const Type& r, const Type& self,
                          const std::string& iface) {
    if (r.kind == TypeKind::Selftype) {
        if (p.kind == TypeKind::Selftype || p == self) return true;
        return p.isImpl() && conforms(p, iface);
    }
    if (p.kind == TypeKind::Selftype)
        return self.kind == TypeKind::Interface && r.kind == TypeKind::Interface &&
               interfaceSubtype(self.name, r.name);
    if (sameType(p, r)) return true;
    return p.isImpl() && r.kind == TypeKind::Interface && conforms(p, r.name);
}

bool TypeSystem::sigMatch(const MethodSig& provided, const MethodSig& required, const Type& self,
                          const std::string& iface) {
    if (provided.name != required.name) return false;
    if (provided.params.size() != required.params.size()) return false;
    for (size_t i = 0; i < provided.params.size(); ++i)
        if (!matchParam(provided.params[i], required.params[i], self)) return false;
    return matchRet(provided.ret, required.ret, self, iface);
}

int TypeSystem::findProvider(const ProvidedSet& ps, const RenameMap& renames,
                             const MethodSig& required, const std::string& iface) {
    for (size_t i = 0; i < ps.methods.size(); ++i) {
        MethodSig p = ps.methods[i];
        p.name = renamedName(renames, p.name);
        if (sigMatch(p, required, ps.self, iface)) return static_cast<int>(i);
    }
    return -1;
}

bool TypeSystem::conforms(const Type& impl, const std::string& iface) {
    return coinductive(conformsMemo_, conformsActive_, {implKey(impl), iface},
                       [&] { return conformsUncached(impl, iface); });
}

bool TypeSystem::conformsUncached(const Type& impl, const std::string& iface) {
    const InterfaceDescriptor* id = env_.findInterface(iface);
    const ProvidedSet* ps = env_.provided(viewBase(impl));
    if (!id || !ps) return false;
    const RenameMap& renames = viewRenames(impl);
    for (const auto& req : id->methods)
        if (findProvider(*ps, renames, req, iface) < 0) return false;
    for (const auto& [name, pseudo] : id->nested) {
        const Type* meta = nullptr;
        for (const auto& [n, t] : ps->nested)
            if (n == name) meta = &t;
        if (!meta || !conforms(*meta, pseudo)) return false;
    }
    return true;
}

std::vector<std::string> TypeSystem::explain(const Type& impl, const std::string& iface) {
    std::vector<std::string> out;
    const InterfaceDescriptor* id = env_.findInterface(iface);
    const ProvidedSet* ps = env_.provided(viewBase(impl));
    if (!id || !ps) {
        out.push_back(fmt::format("{} is not an implementation", impl.str()));
        return out;
    }
    const RenameMap& renames = viewRenames(impl);
    for (const auto& req : id->methods)
        if (findProvider(*ps, renames, req, iface) < 0)
            out.push_back(fmt::format("missing '{}'", req.str()));
    for (const auto& [name, pseudo] : id->nested) {
        const Type* meta = nullptr;
        for (const auto& [n, t] : ps->nested)
            if (n == name) meta = &t;
        if (!meta) {
            out.push_back(fmt::format("missing exported class '{}'", name));
            continue;
        }
        for (const auto& line : explain(*meta, pseudo))
            out.push_back(fmt::format("class {}: {}", name, line));
    }
    return out;
}

bool TypeSystem::interfaceSubtype(const std::string& sub, const std::string& super) {
    if (sub == super) return true;
    return coinductive(subtypeMemo_, subtypeActive_, {sub, super},
                       [&] { return subtypeUncached(sub, super); });
}

bool TypeSystem::subtypeUncached(const std::string& sub, const std::string& super) {
    const InterfaceDescriptor* a = env_.findInterface(sub);
    const InterfaceDescriptor* b = env_.findInterface(super);
    if (!a || !b) return false;
    const Type self = Type::named(TypeKind::Interface, sub);
    for (const auto& req : b->methods) {
        bool found = false;
        for (const auto& p : a->methods) {
            if (sigMatch(p, req, self, super)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    for (const auto& [name, pseudo] : b->nested) {
        bool found = false;
        for (const auto& [n, pa] : a->nested)
            if (n == name && interfaceSubtype(pa, pseudo)) found = true;
        if (!found) return false;
    }
    return true;
}

bool TypeSystem::assignable(const Type& from, const Type& to) {
    if (from.isError() || to.isError()) return true;
    if (to.kind == TypeKind::Double && from.kind == TypeKind::Int) return true;
    if (from.kind == TypeKind::Null) return to.isReference();
    if (to.kind == TypeKind::Interface) {
        if (from.kind == TypeKind::Interface) return interfaceSubtype(from.name, to.name);
        if (from.isImpl() || from.kind == TypeKind::Meta || from.kind == TypeKind::View)
            return conforms(from, to.name);
        return false;
    }
    return sameType(from, to);
}

}  // namespace rom
