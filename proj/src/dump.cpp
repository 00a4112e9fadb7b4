#include "rom/dump.hpp"

#include <fmt/format.h>

namespace rom {

namespace {

std::string accessName(Access a) {
    switch (a) {
        case Access::Public: return "public";
        case Access::Protected: return "protected";
        case Access::Private: return "private";
    }
    return "";
}

std::string kindName(MethodKind k) {
    switch (k) {
        case MethodKind::Source: return "";
        case MethodKind::Forwarder: return " [forwarder]";
        case MethodKind::DefaultNew: return " [default new]";
    }
    return "";
}

std::string methodLine(const MethodImpl& m) {
    std::string s = fmt::format("{} from {}", m.sig.str(), m.origin);
    if (!m.body && m.kind == MethodKind::Source) s += " [abstract]";
    if (m.sig.isFinal) s += " [final]";
    return s + kindName(m.kind);
}

}  // namespace

std::string dump_types(const Program& p) {
    std::string out;
    for (const auto& [name, i] : p.interfaces) {
        out += fmt::format("interface {}\n", name);
        for (const auto& m : i.methods) out += fmt::format("  {}\n", m.str());
        for (const auto& [n, pseudo] : i.nested) out += fmt::format("  class {} = {}\n", n, pseudo);
    }
    for (const auto& id : p.implOrder) {
        const ImplDescriptor& d = *p.findImpl(id);
        out += fmt::format("{} {}{}\n", d.isObject ? "object" : "class", id, d.abstract ? " [abstract]" : "");
        for (const auto& m : d.provided.methods) out += fmt::format("  {}\n", m.str());
        for (const auto& [n, t] : d.provided.nested) out += fmt::format("  nested {} = {}\n", n, t.str());
        for (const auto& m : d.metaProvided.methods) out += fmt::format("  meta {}\n", m.str());
    }
    return out;
}

std::string dump_flattened(const Program& p) {
    std::string out;
    for (const auto& id : p.implOrder) {
        const ImplDescriptor& d = *p.findImpl(id);
        out += fmt::format("{} {}\n", d.isObject ? "object" : "class", id);
        for (const auto& part : d.parts) {
            std::string path;
            for (const auto& s : part.path) path += "::" + s;
            out += fmt::format("  part {} {}{} partition {}\n", part.id, part.declId,
                               path.empty() ? "" : " via " + path.substr(2), part.partition);
        }
        for (size_t k = 0; k < d.partitions.size(); ++k) {
            const Partition& pt = d.partitions[k];
            out += fmt::format("  partition {} of {}\n", k, pt.declId);
            for (const auto& f : pt.fields)
                out += fmt::format("    {} {} {}{}\n", accessName(f.access), f.type.str(), f.name,
                                   f.importOf.empty() ? "" : " [import " + f.importOf + "]");
        }
        std::string order;
        for (int x : d.initOrder) order += fmt::format(" {}", x);
        out += fmt::format("  init order{}\n", order);
        for (const auto& [name, entries] : d.root().methods)
            for (const auto& e : entries)
                out += fmt::format("  {} {}: {}\n", accessName(e.access), name,
                                   methodLine(d.methods[static_cast<size_t>(d.resolve(e.method))]));
        for (const auto& f : d.metaFields)
            out += fmt::format("  meta {} {} {}\n", accessName(f.access), f.type.str(), f.name);
        for (const auto& m : d.metaMethods)
            out += fmt::format("  meta {} {}\n", accessName(m.sig.access), methodLine(m));
        for (const auto& [key, f] : d.families) {
            if (key.part > 0) continue;
            bool any = false;
            for (bool b : f.dispatched) any = any || b;
            if (!any) continue;
            std::string s;
            for (size_t o = 0; o < f.tuples.size(); ++o) {
                s += o ? " " : "";
                s += "(";
                for (size_t i = 0; i < f.tuples[o].size(); ++i) s += (i ? ", " : "") + f.tuples[o][i];
                s += ")";
            }
            out += fmt::format("  multimethod {}{}/{}: {}\n", key.space == MethodSpace::Meta ? "meta " : "",
                               key.name, key.arity, s);
        }
    }
    for (const auto& [key, f] : p.globalFamilies) {
        std::string s;
        for (int o : f.overloads) s += fmt::format("{}{}", s.empty() ? "" : "; ", p.functions[static_cast<size_t>(o)].sig.str());
        out += fmt::format("function {}/{}: {}\n", key.name, key.arity, s);
    }
    return out;
}

std::string dump_dispatch(const Program& p) {
    TypeSystem ts(p);
    std::string out;
    auto table = [&](const ImplDescriptor& d, bool meta, const std::string& iface) {
        const InterfaceDescriptor* i = p.findInterface(iface);
        const ProvidedSet& ps = meta ? d.metaProvided : d.provided;
        const auto& index = meta ? d.metaProvidedMethods : d.providedMethods;
        const auto& methods = meta ? d.metaMethods : d.methods;
        out += fmt::format("{}{} as {}\n", d.id, meta ? " (metaclass)" : "", iface);
        for (size_t k = 0; k < i->methods.size(); ++k) {
            int pi = ts.findProvider(ps, {}, i->methods[k], iface);
            if (pi < 0) {
                out += fmt::format("  [{}] {} -> ?\n", k, i->methods[k].str());
                continue;
            }
            const MethodImpl& m = methods[static_cast<size_t>(index[static_cast<size_t>(pi)])];
            out += fmt::format("  [{}] {} -> {}::{}{}\n", k, i->methods[k].str(), m.origin, m.sig.name,
                               kindName(m.kind));
        }
    };
    for (const auto& [impl, iface] : p.subtypeEdges) table(*p.findImpl(impl), false, iface);
    for (const auto& id : p.implOrder) {
        const ImplDescriptor& d = *p.findImpl(id);
        if (d.isObject) continue;
        for (const auto& iface : p.interfaceOrder)
            if (ts.conforms(Type::named(TypeKind::Meta, id), iface)) table(d, true, iface);
    }
    return out;
}

std::string dump_subtypes(const Program& p) {
    std::string out;
    for (const auto& [impl, iface] : p.subtypeEdges) out += fmt::format("{} <: {}\n", impl, iface);
    return out;
}

}  // namespace rom
