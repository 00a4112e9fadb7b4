#include "rom/types.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace rom {

Type Type::function(std::vector<Type> params, Type ret) {
    Type t;
    t.kind = TypeKind::Function;
    t.params = std::move(params);
    t.ret = std::make_shared<const Type>(std::move(ret));
    return t;
}

Type Type::view(Type base, RenameMap renames) {
    Type t;
    t.kind = TypeKind::View;
    t.base = std::make_shared<const Type>(std::move(base));
    t.renames = normalizeRenames(std::move(renames));
    return t;
}

bool Type::mentionsSelftype() const {
    if (kind == TypeKind::Selftype) return true;
    if (kind == TypeKind::Function) {
        for (const auto& p : params)
            if (p.mentionsSelftype()) return true;
        return ret && ret->mentionsSelftype();
    }
    return false;
}

std::string Type::str() const {
    switch (kind) {
    case TypeKind::Error: return "<error>";
    case TypeKind::Void: return "void";
    case TypeKind::Int: return "int";
    case TypeKind::Double: return "double";
    case TypeKind::Bool: return "bool";
    case TypeKind::String: return "string";
    case TypeKind::Null: return "null";
    case TypeKind::Interface:
    case TypeKind::Class:
    case TypeKind::Object: return name + "&";
    case TypeKind::Meta: return "meta " + name;
    case TypeKind::Selftype: return "selftype&";
    case TypeKind::Function: {
        std::string out = (ret ? ret->str() : "void") + " (*)(";
        for (size_t i = 0; i < params.size(); ++i) {
            if (i) out += ", ";
            out += params[i].str();
        }
        return out + ")";
    }
    case TypeKind::View: return fmt::format("({}) {}", renameStr(renames), base ? base->str() : "?");
    }
    return "?";
}

bool operator==(const Type& a, const Type& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case TypeKind::Interface:
    case TypeKind::Class:
    case TypeKind::Object:
    case TypeKind::Meta: return a.name == b.name;
    case TypeKind::Function: {
        if (a.params != b.params) return false;
        if (!a.ret || !b.ret) return a.ret == b.ret;
        return *a.ret == *b.ret;
    }
    case TypeKind::View:
        return a.renames == b.renames && a.base && b.base && *a.base == *b.base;
    default: return true;
    }
}

RenameMap normalizeRenames(RenameMap m) {
    std::sort(m.begin(), m.end());
    return m;
}

std::string renameStr(const RenameMap& m) {
    std::string out = "rename ";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += m[i].first + " to " + m[i].second;
    }
    return out;
}

bool MethodSig::mentionsSelftype() const {
    if (ret.mentionsSelftype()) return true;
    return std::any_of(params.begin(), params.end(),
                       [](const Type& t) { return t.mentionsSelftype(); });
}

std::string MethodSig::str() const {
    std::string out = ret.str() + " " + name + "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].str();
    }
    return out + ")";
}

Type subst_selftype(const Type& t, const Type& concrete) {
    if (t.kind == TypeKind::Selftype) return concrete;
    if (t.kind == TypeKind::Function) {
        std::vector<Type> ps;
        for (const auto& p : t.params) ps.push_back(subst_selftype(p, concrete));
        return Type::function(std::move(ps), t.ret ? subst_selftype(*t.ret, concrete)
                                                   : Type::prim(TypeKind::Void));
    }
    return t;
}

MethodSig subst_selftype(const MethodSig& sig, const Type& concrete) {
    MethodSig out = sig;
    for (auto& p : out.params) p = subst_selftype(p, concrete);
    out.ret = subst_selftype(out.ret, concrete);
    return out;
}

}  // namespace rom
