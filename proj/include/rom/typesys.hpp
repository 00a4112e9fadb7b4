#pragma once

#include "rom/types.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rom {

/// What an implementation offers to conformance: its public methods with
/// selftype already replaced by the implementation's own type.
struct ProvidedSet {
    Type self;  // Class, Object or Meta
    std::vector<MethodSig> methods;
    std::vector<std::pair<std::string, Type>> nested;  // exported nested class -> its Meta type
};

class ConformanceEnv {
public:
    virtual ~ConformanceEnv() = default;
    virtual const InterfaceDescriptor* findInterface(const std::string& name) const = 0;
    /// Class, Object or Meta; null when unknown.
    virtual const ProvidedSet* provided(const Type& impl) const = 0;
};

/// Structural conformance and interface subtyping. Both relations are
/// computed coinductively: a pair already under examination is assumed to hold,
/// which makes mutually recursive interfaces work.
class TypeSystem {
public:
    explicit TypeSystem(const ConformanceEnv& env) : env_(env) {}

    /// impl is Class, Object, Meta or View.
    bool conforms(const Type& impl, const std::string& iface);
    /// One line per unmet requirement; empty iff conforms.
    std::vector<std::string> explain(const Type& impl, const std::string& iface);

    bool interfaceSubtype(const std::string& sub, const std::string& super);
    /// Nominal equality, except that interfaces with the same structure are
    /// the same type.
    bool sameType(const Type& a, const Type& b);

    bool sigMatch(const MethodSig& provided, const MethodSig& required, const Type& self,
                  const std::string& iface);

    /// Index into `ps.methods` of the method satisfying `required` once
    /// `renames` are applied to the provided names, or -1.
    int findProvider(const ProvidedSet& ps, const RenameMap& renames, const MethodSig& required,
                     const std::string& iface);

    /// Value of type `from` may be stored where `to` is expected.
    bool assignable(const Type& from, const Type& to);

    void clear();

private:
    const ConformanceEnv& env_;
    using Key = std::pair<std::string, std::string>;
    std::map<Key, bool> conformsMemo_, subtypeMemo_;
    std::set<Key> conformsActive_, subtypeActive_;
    int depth_ = 0;

    template <class F>
    bool coinductive(std::map<Key, bool>& memo, std::set<Key>& active, const Key& key, F&& compute);

    bool matchParam(const Type& p, const Type& r, const Type& self);
    bool matchRet(const Type& p, const Type& r, const Type& self, const std::string& iface);
    bool conformsUncached(const Type& impl, const std::string& iface);
    bool subtypeUncached(const std::string& sub, const std::string& super);
};

std::string renamedName(const RenameMap& renames, const std::string& name);

}  // namespace rom
