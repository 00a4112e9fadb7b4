#pragma once

#include "rom/ast.hpp"
#include "rom/typesys.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace rom {

enum class MethodKind {
    Source,      // body written in some declaration, copied into this implementation
    Forwarder,   // synthesized by `import`: calls the same method on the hidden field
    DefaultNew,  // zero-argument constructor of a class that declares none
};

struct MethodImpl {
    int index = -1;
    MethodSig sig;               // selftype replaced by the implementation's type
    std::string origin;          // declaration the code was written in
    int part = 0;                // part whose code this is
    const MethodDecl* decl = nullptr;
    std::unique_ptr<BlockStmt> body;  // this copy's body; null when abstract
    MethodKind kind = MethodKind::Source;
    SourceLoc loc;
    bool isMeta = false;
    bool isNew = false;

    // Forwarder
    int fwdPartition = -1;
    int fwdField = -1;
    std::string fwdImpl;
    int fwdMethod = -1;
};

struct FieldSlot {
    std::string name;
    Type type;
    Access access = Access::Public;
    std::string origin;
    SourceLoc loc;
    ExprPtr init;          // per-copy clone
    std::string importOf;  // hidden field holding an imported instance
};

/// One copy of an ancestor's fields. Parts merged by `sharing` use one partition.
struct Partition {
    int rep = 0;  // representative part
    std::string declId;
    std::vector<FieldSlot> fields;
};

struct MethodEntry {
    int method = -1;
    Access access = Access::Public;  // as seen at this level
};

struct FieldRef {
    int part = -1;  // resolved to a partition once sharing is final
    int index = -1;
    Access access = Access::Public;
    std::string origin;
    int partition = -1;
};

/// Names visible to the code of one part.
struct PartTable {
    std::map<std::string, std::vector<MethodEntry>> methods;
    std::map<std::string, std::vector<FieldRef>> fields;
};

/// A node in the inheritance tree of an implementation: the root is the
/// implementation's own declaration, every inheritance clause adds a copy of
/// the parent's tree below it.
struct Part {
    int id = 0;
    int parent = -1;
    std::vector<std::string> path;  // clause parent names from the root
    std::string declId;
    const ImplDecl* decl = nullptr;
    std::vector<int> children;
    std::vector<const InheritClause*> clauses;  // parallel to `children`
    int partition = -1;
    PartTable table;
};

struct Family {
    FamilyKey key;
    std::string owner;          // implementation id; empty for global functions
    std::vector<int> overloads;
    std::vector<Access> access;  // per overload, as seen at the family's level
    std::vector<bool> dispatched;
    /// Per overload, the implementation ids at the dispatched positions.
    std::vector<std::vector<std::string>> tuples;
    Type ret;
    bool valid = true;
};

struct ImplDescriptor {
    std::string id;
    bool isObject = false;
    bool anonymous = false;
    bool abstract = false;
    const ImplDecl* decl = nullptr;
    std::vector<std::string> context;  // enclosing named objects, outermost first
    Type selfType;

    std::vector<Part> parts;
    std::vector<Partition> partitions;
    std::vector<int> initOrder;  // partitions, in field initialization order

    std::vector<MethodImpl> methods;
    std::vector<int> finalImpl;  // override resolution per entry of `methods`

    std::vector<FieldSlot> metaFields;
    std::vector<MethodImpl> metaMethods;
    std::map<std::string, std::vector<int>> metaTable;
    std::map<std::string, Access> metaAccess;  // by meta field name

    std::map<FamilyKey, Family> families;

    std::vector<std::pair<std::string, std::string>> nested;  // exported name -> impl id
    std::set<std::string> friendImpls;
    std::set<std::pair<std::string, std::string>> friendFamilies;  // (owner, name)
    std::vector<std::pair<std::string, SourceLoc>> implementsClauses;

    ProvidedSet provided;
    ProvidedSet metaProvided;
    std::vector<int> providedMethods;      // method index per entry of provided.methods
    std::vector<int> metaProvidedMethods;  // meta method index per entry of metaProvided.methods

    int resolve(int method) const { return finalImpl[static_cast<size_t>(method)]; }
    const PartTable& root() const { return parts[0].table; }
    const Family* family(const FamilyKey& k) const {
        auto it = families.find(k);
        return it == families.end() ? nullptr : &it->second;
    }
};

struct GlobalFunction {
    int index = -1;
    MethodSig sig;
    const MethodDecl* decl = nullptr;
    std::unique_ptr<BlockStmt> body;
    SourceLoc loc;
};

/// Everything the runtime needs from a checked program.
class Program : public ConformanceEnv {
public:
    std::map<std::string, InterfaceDescriptor> interfaces;
    std::vector<std::string> interfaceOrder;
    std::map<std::string, std::unique_ptr<ImplDescriptor>> impls;
    std::vector<std::string> implOrder;
    std::vector<GlobalFunction> functions;
    std::map<FamilyKey, Family> globalFamilies;
    std::vector<StmtPtr> topLevel;
    int globalFrameSize = 0;
    std::vector<std::pair<std::string, std::string>> subtypeEdges;  // impl <: interface

    const InterfaceDescriptor* findInterface(const std::string& name) const override {
        auto it = interfaces.find(name);
        return it == interfaces.end() ? nullptr : &it->second;
    }
    const ProvidedSet* provided(const Type& impl) const override {
        const ImplDescriptor* d = findImpl(impl.name);
        if (!d) return nullptr;
        if (impl.kind == TypeKind::Meta) return d->isObject ? nullptr : &d->metaProvided;
        if (impl.kind == TypeKind::Class || impl.kind == TypeKind::Object) return &d->provided;
        return nullptr;
    }
    const ImplDescriptor* findImpl(const std::string& id) const {
        auto it = impls.find(id);
        return it == impls.end() ? nullptr : it->second.get();
    }
    ImplDescriptor* findImpl(const std::string& id) {
        auto it = impls.find(id);
        return it == impls.end() ? nullptr : it->second.get();
    }
    const Family* globalFamily(const FamilyKey& k) const {
        auto it = globalFamilies.find(k);
        return it == globalFamilies.end() ? nullptr : &it->second;
    }
};

}  // namespace rom
