#include "sema.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace rom::sema {

std::string Sema::familyDisplay(const Family& f) const {
    return f.owner.empty() ? f.key.name : f.owner + "." + f.key.name;
}

void Sema::validateFamily(Family& f, const std::vector<const MethodSig*>& sigs,
                          const std::vector<SourceLoc>& locs, const std::string& display) {
    if (sigs.empty()) return;
    const size_t n = sigs[0]->params.size();
    f.dispatched.assign(n, false);
    for (const auto* s : sigs)
        for (size_t i = 0; i < n; ++i)
            if (s->params[i].isImpl()) f.dispatched[i] = true;
    f.ret = sigs[0]->ret;
    f.valid = true;
    f.tuples.clear();

    for (size_t o = 0; o < sigs.size(); ++o) {
        const MethodSig& s = *sigs[o];
        for (size_t i = 0; i < n; ++i) {
            const Type& p = s.params[i];
            if (p.isError()) {
                f.valid = false;
                continue;
            }
            if (f.dispatched[i]) {
                if (p.kind == TypeKind::Interface) {
                    error("E-MM-DEFAULT", locs[o],
                          fmt::format("'{}' takes interface '{}' in parameter {}, where other "
                                      "overloads of '{}' dispatch on a class",
                                      s.str(), p.name, i + 1, display));
                    f.valid = false;
                } else if (!p.isImpl()) {
                    error("E-MM-SIG", locs[o],
                          fmt::format("'{}' takes '{}' in parameter {}, where other overloads of "
                                      "'{}' dispatch on a class",
                                      s.str(), p.str(), i + 1, display));
                    f.valid = false;
                }
            } else if (o > 0 && !sigs[0]->params[i].isError() &&
                       !ts_.sameType(p, sigs[0]->params[i])) {
                error("E-MM-SIG", locs[o],
                      fmt::format("'{}' and '{}' differ in parameter {}, which is not dispatched on",
                                  sigs[0]->str(), s.str(), i + 1));
                f.valid = false;
            }
        }
        if (o > 0 && !s.ret.isError() && !f.ret.isError() && !ts_.sameType(s.ret, f.ret)) {
            error("E-MM-SIG", locs[o],
                  fmt::format("'{}' and '{}' of '{}' return different types", sigs[0]->str(),
                              s.str(), display));
            f.valid = false;
        }
        std::vector<std::string> tuple;
        for (size_t i = 0; i < n; ++i)
            if (f.dispatched[i]) tuple.push_back(s.params[i].isImpl() ? s.params[i].name : "");
        for (size_t prev = 0; prev < f.tuples.size(); ++prev) {
            if (f.tuples[prev] != tuple) continue;
            error("E-MM-DUP", locs[o],
                  fmt::format("'{}' duplicates '{}'", s.str(), sigs[prev]->str()));
            f.valid = false;
            break;
        }
        f.tuples.push_back(std::move(tuple));
    }
}

void Sema::validateAllFamilies(ImplDescriptor& d) {
    for (auto& [key, f] : d.families) {
        const auto& methods = key.space == MethodSpace::Meta ? d.metaMethods : d.methods;
        std::vector<const MethodSig*> sigs;
        std::vector<SourceLoc> locs;
        for (int o : f.overloads) {
            sigs.push_back(&methods[static_cast<size_t>(o)].sig);
            locs.push_back(methods[static_cast<size_t>(o)].loc);
        }
        validateFamily(f, sigs, locs, d.id + "." + key.name);
    }
}

void Sema::validateGlobalFamilies() {
    for (auto& [key, f] : prog_->globalFamilies) {
        std::vector<const MethodSig*> sigs;
        std::vector<SourceLoc> locs;
        for (int o : f.overloads) {
            sigs.push_back(&prog_->functions[static_cast<size_t>(o)].sig);
            locs.push_back(prog_->functions[static_cast<size_t>(o)].loc);
        }
        validateFamily(f, sigs, locs, key.name);
    }
}

void Sema::checkImplements(ImplDescriptor& d) {
    for (const auto& [iface, loc] : d.implementsClauses) {
        if (ts_.conforms(d.selfType, iface)) continue;
        auto why = ts_.explain(d.selfType, iface);
        std::string msg = fmt::format("'{}' does not implement '{}'", d.id, iface);
        for (size_t i = 0; i < why.size(); ++i) msg += (i ? "; " : ": ") + why[i];
        error("E-IMPLEMENTS", loc, msg);
    }
}

void Sema::buildSubtypeGraph() {
    prog_->subtypeEdges.clear();
    for (const auto& impl : prog_->implOrder) {
        const ImplDescriptor& d = *prog_->findImpl(impl);
        for (const auto& iface : prog_->interfaceOrder)
            if (ts_.conforms(d.selfType, iface)) prog_->subtypeEdges.emplace_back(impl, iface);
    }
}

void Sema::checkCompleteness() {
    constexpr size_t kMaxTuples = 100000;
    for (const auto& site : sites_) {
        if (site.quiet) continue;
        std::vector<std::vector<std::string>> candidates;
        for (const auto& t : site.argTypes) {
            std::vector<std::string> c;
            if (t.isImpl()) {
                c.push_back(t.name);
            } else {
                for (const auto& [impl, iface] : prog_->subtypeEdges) {
                    if (iface != t.name) continue;
                    const ImplDescriptor* d = prog_->findImpl(impl);
                    if (d && !d->abstract) c.push_back(impl);
                }
            }
            candidates.push_back(std::move(c));
        }
        std::vector<std::string> missing;
        std::vector<size_t> idx(candidates.size(), 0);
        bool empty = false;
        for (const auto& c : candidates)
            if (c.empty()) empty = true;
        size_t visited = 0;
        while (!empty && visited++ < kMaxTuples) {
            std::vector<std::string> tuple;
            for (size_t i = 0; i < candidates.size(); ++i) tuple.push_back(candidates[i][idx[i]]);
            if (std::find(site.family->tuples.begin(), site.family->tuples.end(), tuple) ==
                site.family->tuples.end()) {
                std::string s = "(";
                for (size_t i = 0; i < tuple.size(); ++i) s += (i ? ", " : "") + tuple[i];
                missing.push_back(s + ")");
            }
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == candidates[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
        if (missing.empty()) continue;
        std::string list;
        for (size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + missing[i];
        error("E-MM-INCOMPLETE", site.loc,
              fmt::format("multimethod '{}' has no overload for {}", site.display, list));
    }
}

}  // namespace rom::sema
