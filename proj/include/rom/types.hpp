#pragma once

#include "rom/source.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rom {

enum class Access { Public, Protected, Private };

enum class TypeKind {
    Error,  // poison: already reported, suppresses cascades
    Void,
    Int,
    Double,
    Bool,
    String,
    Null,
    Interface,
    Class,
    Object,
    Meta,      // the metaclass object of a class
    Selftype,  // only in unsubstituted signatures
    Function,
    View,      // rename-cast view over an implementation
};

/// old name -> new name, kept sorted by old name so equal maps compare equal.
using RenameMap = std::vector<std::pair<std::string, std::string>>;

struct Type {
    TypeKind kind = TypeKind::Error;
    std::string name;                   // Interface, Class, Object, Meta
    std::vector<Type> params;           // Function
    std::shared_ptr<const Type> ret;    // Function
    std::shared_ptr<const Type> base;   // View
    RenameMap renames;                  // View

    static Type error() { return {}; }
    static Type prim(TypeKind k) {
        Type t;
        t.kind = k;
        return t;
    }
    static Type named(TypeKind k, std::string n) {
        Type t;
        t.kind = k;
        t.name = std::move(n);
        return t;
    }
    static Type selftype() { return prim(TypeKind::Selftype); }
    static Type function(std::vector<Type> params, Type ret);
    static Type view(Type base, RenameMap renames);

    bool isError() const { return kind == TypeKind::Error; }
    bool isImpl() const { return kind == TypeKind::Class || kind == TypeKind::Object; }
    bool isNumeric() const { return kind == TypeKind::Int || kind == TypeKind::Double; }
    bool isPrimitive() const {
        return kind == TypeKind::Int || kind == TypeKind::Double || kind == TypeKind::Bool ||
               kind == TypeKind::String;
    }
    bool isReference() const {
        return kind == TypeKind::Interface || kind == TypeKind::Class ||
               kind == TypeKind::Object || kind == TypeKind::Meta ||
               kind == TypeKind::Function || kind == TypeKind::View;
    }
    bool mentionsSelftype() const;

    std::string str() const;

    /// Nominal equality; interfaces are compared structurally by TypeSystem::sameType.
    friend bool operator==(const Type& a, const Type& b);
};

RenameMap normalizeRenames(RenameMap m);
std::string renameStr(const RenameMap& m);

struct MethodSig {
    std::string name;
    std::vector<Type> params;
    Type ret = Type::prim(TypeKind::Void);
    Access access = Access::Public;
    bool isFinal = false;
    bool isAbstract = false;
    bool isMeta = false;

    bool mentionsSelftype() const;
    /// `int g(int)`; parameter names are not part of a signature.
    std::string str() const;
    bool sameParams(const MethodSig& o) const { return params == o.params; }
};

struct InterfaceDescriptor {
    std::string name;
    SourceLoc loc;
    std::vector<MethodSig> methods;
    /// Exported nested type names with the pseudo-interface that collects the
    /// qualified entries (`T.m(...)`) for that name, e.g. "ScrollBar" ->
    /// "ProductLibrary.ScrollBar".
    std::vector<std::pair<std::string, std::string>> nested;
    bool isNested = false;
};

/// Replaces every Selftype in parameters and return with `concrete`.
MethodSig subst_selftype(const MethodSig& sig, const Type& concrete);
Type subst_selftype(const Type& t, const Type& concrete);

}  // namespace rom
