#include "rom/runtime.hpp"

#include <fmt/format.h>

#include <climits>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>

namespace rom {

namespace {

struct Instance;
struct Frame;

struct Table {
    const ImplDescriptor* desc = nullptr;
    bool meta = false;
    std::string iface;
    RenameMap renames;
    std::vector<int> methods;  // per interface entry: index into desc methods or metaMethods
};

struct Closure {
    const FunLitExpr* lit = nullptr;
    std::shared_ptr<Frame> captured;
};

struct Value {
    enum class K { Unit, Int, Double, Bool, String, Null, Obj, Meta, Fat, Fun, View } k = K::Unit;
    long long i = 0;
    double d = 0;
    bool b = false;
    std::string s;
    std::shared_ptr<Instance> obj;          // Obj; target of Fat and View
    const ImplDescriptor* meta = nullptr;   // Meta; target of Fat and View when obj is null
    std::shared_ptr<const Table> table;     // Fat
    std::shared_ptr<Closure> fn;            // Fun
    const RenameMap* renames = nullptr;     // View

    static Value unit() { return {}; }
    static Value null() {
        Value v;
        v.k = K::Null;
        return v;
    }
    static Value integer(long long x) {
        Value v;
        v.k = K::Int;
        v.i = x;
        return v;
    }
    static Value dbl(double x) {
        Value v;
        v.k = K::Double;
        v.d = x;
        return v;
    }
    static Value boolean(bool x) {
        Value v;
        v.k = K::Bool;
        v.b = x;
        return v;
    }
    static Value str(std::string x) {
        Value v;
        v.k = K::String;
        v.s = std::move(x);
        return v;
    }
    static Value object(std::shared_ptr<Instance> o) {
        Value v;
        v.k = K::Obj;
        v.obj = std::move(o);
        return v;
    }
    static Value metaclass(const ImplDescriptor* d) {
        Value v;
        v.k = K::Meta;
        v.meta = d;
        return v;
    }
};

struct Instance {
    const ImplDescriptor* desc = nullptr;
    std::vector<std::vector<Value>> fields;  // per partition
    std::shared_ptr<Frame> captured;         // anonymous objects only
};

struct Frame {
    std::vector<Value> slots;
    std::shared_ptr<Frame> parent;
    bool hasSelf = false;
    Value self;
};

struct Failure {
    RuntimeError err;
};

enum class Flow { Normal, Return, Break };

long long wrapAdd(long long a, long long b) {
    return static_cast<long long>(static_cast<unsigned long long>(a) + static_cast<unsigned long long>(b));
}
long long wrapSub(long long a, long long b) {
    return static_cast<long long>(static_cast<unsigned long long>(a) - static_cast<unsigned long long>(b));
}
long long wrapMul(long long a, long long b) {
    return static_cast<long long>(static_cast<unsigned long long>(a) * static_cast<unsigned long long>(b));
}

class Interp {
public:
    Interp(const Program& prog, std::ostream& out) : prog_(prog), out_(out), ts_(prog) {}

    RunResult run() {
        RunResult r;
        try {
            global_ = std::make_shared<Frame>();
            global_->slots.assign(static_cast<size_t>(prog_.globalFrameSize), Value::null());
            cur_ = global_;
            for (const auto& id : prog_.implOrder) {
                const ImplDescriptor* d = prog_.findImpl(id);
                if (d->isObject) continue;
                auto& store = metaStore_[d];
                store.resize(d->metaFields.size());
                for (size_t k = 0; k < d->metaFields.size(); ++k)
                    store[k] = defaultFor(d->metaFields[k].type);
            }
            for (const auto& id : prog_.implOrder) {
                const ImplDescriptor* d = prog_.findImpl(id);
                if (d->isObject) continue;
                for (size_t k = 0; k < d->metaFields.size(); ++k) {
                    const FieldSlot& f = d->metaFields[k];
                    if (!f.init) continue;
                    auto fr = std::make_shared<Frame>();
                    fr->parent = global_;
                    fr->hasSelf = true;
                    fr->self = Value::metaclass(d);
                    Value v = withFrame(fr, [&] { return eval(*f.init); });
                    metaStore_[d][k] = coerce(std::move(v), f.type);
                }
            }
            for (const auto& s : prog_.topLevel) {
                if (s->kind == StmtKind::VarDecl) {
                    execVarDecl(as<VarDeclStmt>(*s));
                    continue;
                }
                Flow f = exec(*s);
                if (f == Flow::Return) break;
            }
        } catch (const Failure& f) {
            r.ok = false;
            r.error = f.err;
        }
        out_.flush();
        r.stats = stats_;
        return r;
    }

private:
    const Program& prog_;
    std::ostream& out_;
    TypeSystem ts_;
    RunStats stats_;
    std::shared_ptr<Frame> global_;
    std::shared_ptr<Frame> cur_;
    Value retVal_;
    std::map<const ImplDescriptor*, std::vector<Value>> metaStore_;
    std::map<const ImplDescriptor*, std::shared_ptr<Instance>> singletons_;
    std::map<std::tuple<const ImplDescriptor*, bool, std::string, std::string>, std::shared_ptr<const Table>>
        tables_;

    [[noreturn]] void fail(const std::string& code, SourceLoc loc, std::string msg) {
        throw Failure{{code, std::move(msg), loc}};
    }

    template <class F>
    auto withFrame(std::shared_ptr<Frame> f, F&& body) -> decltype(body()) {
        std::swap(cur_, f);
        struct Restore {
            std::shared_ptr<Frame>& cur;
            std::shared_ptr<Frame>& saved;
            ~Restore() { std::swap(cur, saved); }
        } restore{cur_, f};
        return body();
    }

    std::shared_ptr<Frame> newFrame(int size, std::shared_ptr<Frame> parent) {
        auto f = std::make_shared<Frame>();
        f->slots.assign(static_cast<size_t>(size), Value::null());
        f->parent = std::move(parent);
        return f;
    }

    // -----------------------------------------------------------------------
    // Values

    static Value defaultFor(const Type& t) {
        switch (t.kind) {
            case TypeKind::Int: return Value::integer(0);
            case TypeKind::Double: return Value::dbl(0);
            case TypeKind::Bool: return Value::boolean(false);
            case TypeKind::String: return Value::str("");
            default: return Value::null();
        }
    }

    static std::string show(const Value& v) {
        switch (v.k) {
            case Value::K::Int: return std::to_string(v.i);
            case Value::K::Double: return fmt::format("{}", v.d);
            case Value::K::Bool: return v.b ? "true" : "false";
            case Value::K::String: return v.s;
            case Value::K::Null: return "null";
            default: return "<ref>";
        }
    }

    /// Instance or metaclass behind a reference value.
    static Value strip(const Value& v) {
        if (v.k == Value::K::Fat || v.k == Value::K::View) {
            if (v.obj) return Value::object(v.obj);
            return Value::metaclass(v.meta);
        }
        return v;
    }

    static const void* identity(const Value& v) {
        switch (v.k) {
            case Value::K::Obj:
            case Value::K::Fat:
            case Value::K::View:
                return v.obj ? static_cast<const void*>(v.obj.get()) : static_cast<const void*>(v.meta);
            case Value::K::Meta: return v.meta;
            case Value::K::Fun: return v.fn.get();
            default: return nullptr;
        }
    }

    static std::string runtimeClass(const Value& v) {
        if ((v.k == Value::K::Obj || v.k == Value::K::Fat || v.k == Value::K::View) && v.obj)
            return v.obj->desc->id;
        return "";
    }

    std::shared_ptr<const Table> table(const ImplDescriptor* d, bool meta, const std::string& iface,
                                       const RenameMap& renames) {
        ++stats_.tableLookups;
        auto key = std::make_tuple(d, meta, iface, renameStr(renames));
        if (auto it = tables_.find(key); it != tables_.end()) return it->second;
        ++stats_.tablesBuilt;
        auto t = std::make_shared<Table>();
        t->desc = d;
        t->meta = meta;
        t->iface = iface;
        t->renames = renames;
        const InterfaceDescriptor* id = prog_.findInterface(iface);
        const ProvidedSet& ps = meta ? d->metaProvided : d->provided;
        const auto& index = meta ? d->metaProvidedMethods : d->providedMethods;
        for (const auto& req : id->methods) {
            int p = ts_.findProvider(ps, renames, req, iface);
            t->methods.push_back(p < 0 ? -1 : index[static_cast<size_t>(p)]);
        }
        tables_.emplace(key, t);
        return t;
    }

    Value toFat(const Value& v, const std::string& iface) {
        switch (v.k) {
            case Value::K::Null: return v;
            case Value::K::Fat:
                if (v.table->iface == iface) return v;
                return makeFat(v.obj, v.meta, iface, v.table->renames);
            case Value::K::View: return makeFat(v.obj, v.meta, iface, *v.renames);
            case Value::K::Obj: return makeFat(v.obj, nullptr, iface, {});
            case Value::K::Meta: return makeFat(nullptr, v.meta, iface, {});
            default: return v;
        }
    }

    Value makeFat(std::shared_ptr<Instance> obj, const ImplDescriptor* meta, const std::string& iface,
                  const RenameMap& renames) {
        Value f;
        f.k = Value::K::Fat;
        f.obj = obj;
        f.meta = meta;
        f.table = obj ? table(obj->desc, false, iface, renames) : table(meta, true, iface, renames);
        return f;
    }

    Value coerce(Value v, const Type& to) {
        switch (to.kind) {
            case TypeKind::Double:
                if (v.k == Value::K::Int) return Value::dbl(static_cast<double>(v.i));
                return v;
            case TypeKind::Interface: return toFat(v, to.name);
            case TypeKind::Class:
            case TypeKind::Object:
            case TypeKind::Meta: return strip(v);
            default: return v;
        }
    }

    // -----------------------------------------------------------------------
    // Objects

    std::shared_ptr<Frame> codeParent(const ImplDescriptor* d, int part, const Instance* self) {
        if (d->anonymous && self && d->parts[static_cast<size_t>(part)].declId == d->id)
            return self->captured;
        return global_;
    }

    std::shared_ptr<Instance> instantiate(const ImplDescriptor* d, std::shared_ptr<Frame> captured) {
        auto inst = std::make_shared<Instance>();
        inst->desc = d;
        inst->captured = std::move(captured);
        inst->fields.resize(d->partitions.size());
        for (size_t p = 0; p < d->partitions.size(); ++p)
            for (const auto& f : d->partitions[p].fields) inst->fields[p].push_back(defaultFor(f.type));
        return inst;
    }

    void initFields(const std::shared_ptr<Instance>& inst) {
        const ImplDescriptor* d = inst->desc;
        for (int p : d->initOrder) {
            const Partition& partition = d->partitions[static_cast<size_t>(p)];
            for (size_t k = 0; k < partition.fields.size(); ++k) {
                const FieldSlot& f = partition.fields[k];
                if (!f.importOf.empty()) {
                    const ImplDescriptor* imp = prog_.findImpl(f.importOf);
                    inst->fields[static_cast<size_t>(p)][k] = construct(imp, {}, f.loc);
                    continue;
                }
                if (!f.init) continue;
                auto fr = newFrame(0, codeParent(d, partition.rep, inst.get()));
                fr->hasSelf = true;
                fr->self = Value::object(inst);
                Value v = withFrame(fr, [&] { return eval(*f.init); });
                inst->fields[static_cast<size_t>(p)][k] = coerce(std::move(v), f.type);
            }
        }
    }

    std::shared_ptr<Instance> singleton(const std::string& id) {
        const ImplDescriptor* d = prog_.findImpl(id);
        if (auto it = singletons_.find(d); it != singletons_.end()) return it->second;
        auto inst = instantiate(d, nullptr);
        singletons_[d] = inst;
        initFields(inst);
        return inst;
    }

    /// Runs the zero-argument or chosen `new` of class `d`.
    Value construct(const ImplDescriptor* d, std::vector<Value> args, SourceLoc loc, int method = -1) {
        if (method < 0) {
            const Family* f = d->family({MethodSpace::Meta, -1, "new", static_cast<int>(args.size())});
            if (!f) fail("R-MM-NONE", loc, fmt::format("'{}' has no matching 'new'", d->id));
            method = chooseOverload(*f, args, -1, false, loc, d->id + ".new");
        }
        return invokeMeta(d, method, std::move(args), loc);
    }

    // -----------------------------------------------------------------------
    // Calls

    int chooseOverload(const Family& f, const std::vector<Value>& args, int staticMethod,
                       bool staticApplies, SourceLoc loc, const std::string& display) {
        std::vector<std::string> classes;
        bool any = false;
        for (size_t i = 0; i < f.dispatched.size() && i < args.size(); ++i) {
            if (!f.dispatched[i]) continue;
            any = true;
            if (args[i].k == Value::K::Null)
                fail("R-NULL", loc, fmt::format("argument {} of '{}' is null", i + 1, display));
            classes.push_back(runtimeClass(args[i]));
        }
        const int sel = select_multimethod(f, classes);
        if (staticMethod >= 0 && staticApplies) {
            ++stats_.staticChecked;
            if (sel == staticMethod) ++stats_.staticAgreed;
        } else if (any) {
            ++stats_.dynamicDispatches;
        }
        if (sel < 0) {
            std::string tuple;
            for (size_t i = 0; i < classes.size(); ++i) tuple += (i ? ", " : "") + classes[i];
            fail("R-MM-NONE", loc, fmt::format("no overload of '{}' for ({})", display, tuple));
        }
        return sel;
    }

    std::vector<Value> evalArgs(std::vector<ExprPtr>& args) {
        std::vector<Value> out;
        out.reserve(args.size());
        for (auto& a : args) out.push_back(eval(*a));
        return out;
    }

    Value runBody(BlockStmt& body, std::shared_ptr<Frame> fr, const Type& ret) {
        retVal_ = Value::unit();
        Flow flow = withFrame(std::move(fr), [&] { return execStmts(body.stmts); });
        Value r = flow == Flow::Return ? std::move(retVal_) : Value::unit();
        retVal_ = Value::unit();
        if (ret.kind == TypeKind::Void) return Value::unit();
        return coerce(std::move(r), ret);
    }

    Value invoke(const ImplDescriptor* d, int index, const Value& receiver, std::vector<Value> args,
                 SourceLoc loc) {
        ++stats_.calls;
        const MethodImpl& m = d->methods[static_cast<size_t>(d->resolve(index))];
        switch (m.kind) {
            case MethodKind::Forwarder: {
                const Value& hidden = receiver.obj->fields[static_cast<size_t>(m.fwdPartition)]
                                                          [static_cast<size_t>(m.fwdField)];
                const ImplDescriptor* target = prog_.findImpl(m.fwdImpl);
                return invoke(target, m.fwdMethod, hidden, std::move(args), loc);
            }
            case MethodKind::DefaultNew: return Value::unit();
            case MethodKind::Source: break;
        }
        if (!m.body)
            fail("R-ABSTRACT", loc, fmt::format("'{}.{}' has no body", d->id, m.sig.name));
        auto fr = newFrame(m.body->frameSize, codeParent(d, m.part, receiver.obj.get()));
        fr->hasSelf = true;
        fr->self = receiver;
        for (size_t i = 0; i < args.size(); ++i) fr->slots[i] = coerce(std::move(args[i]), m.sig.params[i]);
        return runBody(*m.body, std::move(fr), m.sig.ret);
    }

    Value invokeMeta(const ImplDescriptor* d, int index, std::vector<Value> args, SourceLoc loc) {
        ++stats_.calls;
        const MethodImpl& m = d->metaMethods[static_cast<size_t>(index)];
        if (m.isNew || m.kind == MethodKind::DefaultNew) {
            if (d->abstract)
                fail("R-ABSTRACT", loc, fmt::format("cannot instantiate abstract class '{}'", d->id));
            auto inst = instantiate(d, nullptr);
            initFields(inst);
            if (m.kind == MethodKind::Source) {
                if (!m.body) fail("R-ABSTRACT", loc, fmt::format("'{}.new' has no body", d->id));
                auto fr = newFrame(m.body->frameSize, global_);
                fr->hasSelf = true;
                fr->self = Value::object(inst);
                for (size_t i = 0; i < args.size(); ++i)
                    fr->slots[i] = coerce(std::move(args[i]), m.sig.params[i]);
                runBody(*m.body, std::move(fr), Type::prim(TypeKind::Void));
            }
            return Value::object(inst);
        }
        if (!m.body) fail("R-ABSTRACT", loc, fmt::format("'{}.{}' has no body", d->id, m.sig.name));
        auto fr = newFrame(m.body->frameSize, global_);
        fr->hasSelf = true;
        fr->self = Value::metaclass(d);
        for (size_t i = 0; i < args.size(); ++i) fr->slots[i] = coerce(std::move(args[i]), m.sig.params[i]);
        return runBody(*m.body, std::move(fr), m.sig.ret);
    }

    /// Calls family `key` on an instance or metaclass receiver.
    Value callOn(const Value& recv, const FamilyKey& key, std::vector<Value> args, int staticMethod,
                 const std::string& staticOwner, SourceLoc loc) {
        if (recv.k == Value::K::Null)
            fail("R-NULL", loc, fmt::format("call of '{}' on a null reference", key.name));
        if (recv.k == Value::K::Meta) {
            const ImplDescriptor* d = recv.meta;
            const Family* f = d->family(key);
            if (!f) fail("R-MM-NONE", loc, fmt::format("'{}' has no meta method '{}'", d->id, key.name));
            int m = chooseOverload(*f, args, staticMethod, d->id == staticOwner, loc, d->id + "." + key.name);
            return invokeMeta(d, m, std::move(args), loc);
        }
        const ImplDescriptor* d = recv.obj->desc;
        const Family* f = d->family(key);
        if (!f) fail("R-MM-NONE", loc, fmt::format("'{}' has no method '{}'", d->id, key.name));
        int m = chooseOverload(*f, args, staticMethod, d->id == staticOwner, loc, d->id + "." + key.name);
        return invoke(d, m, recv, std::move(args), loc);
    }

    Value selfAt(int hops, SourceLoc loc) {
        for (Frame* f = cur_.get(); f; f = f->parent.get()) {
            if (!f->hasSelf) continue;
            if (hops-- == 0) return f->self;
        }
        fail("R-NULL", loc, "no receiver in scope");
    }

    Value callClosure(const Value& fv, std::vector<Value> args, SourceLoc loc) {
        if (fv.k != Value::K::Fun) fail("R-NULL", loc, "call of a null function reference");
        ++stats_.calls;
        const FunLitExpr& lit = *fv.fn->lit;
        auto fr = newFrame(lit.body->frameSize, fv.fn->captured);
        for (size_t i = 0; i < args.size(); ++i) fr->slots[i] = coerce(std::move(args[i]), lit.paramTypes[i]);
        return runBody(*lit.body, std::move(fr), *lit.sig.ret);
    }

    Value evalCall(CallExpr& e) {
        CallInfo& info = e.info;
        Value result;
        switch (info.target) {
            case CallInfo::Target::Method: {
                auto& m = as<MemberExpr>(*e.callee);
                Value recv = eval(*m.object);
                std::vector<Value> args = evalArgs(e.args);
                if (info.receiverIsInterface) {
                    if (recv.k == Value::K::Null)
                        fail("R-NULL", e.loc, fmt::format("call of '{}' on a null reference", m.name));
                    if (recv.k != Value::K::Fat) recv = toFat(recv, info.iface);
                    const int idx = recv.table->methods[static_cast<size_t>(info.ifaceEntry)];
                    if (idx < 0) fail("R-MM-NONE", e.loc, fmt::format("no method for '{}.{}'", info.iface, m.name));
                    if (recv.obj) {
                        result = invoke(recv.obj->desc, idx, Value::object(recv.obj), std::move(args), e.loc);
                    } else {
                        result = invokeMeta(recv.meta, idx, std::move(args), e.loc);
                    }
                    break;
                }
                recv = strip(recv);
                const Type& st = m.object->type.kind == TypeKind::View ? *m.object->type.base : m.object->type;
                result = callOn(recv, info.family, std::move(args), info.staticMethod, st.name, e.loc);
                break;
            }
            case CallInfo::Target::ImplicitMethod: {
                Value recv = selfAt(info.hops, e.loc);
                std::vector<Value> args = evalArgs(e.args);
                const ImplDescriptor* d = recv.k == Value::K::Meta ? recv.meta : recv.obj->desc;
                result = callOn(recv, info.family, std::move(args), info.staticMethod, d->id, e.loc);
                break;
            }
            case CallInfo::Target::SingletonMethod: {
                const ImplDescriptor* d = prog_.findImpl(info.owner);
                Value recv = info.family.space == MethodSpace::Meta ? Value::metaclass(d)
                                                                    : Value::object(singleton(info.owner));
                std::vector<Value> args = evalArgs(e.args);
                result = callOn(recv, info.family, std::move(args), info.staticMethod, d->id, e.loc);
                break;
            }
            case CallInfo::Target::GlobalFunction: {
                std::vector<Value> args = evalArgs(e.args);
                const Family* f = prog_.globalFamily(info.family);
                int idx = chooseOverload(*f, args, info.staticMethod, true, e.loc, info.family.name);
                const GlobalFunction& g = prog_.functions[static_cast<size_t>(idx)];
                ++stats_.calls;
                auto fr = newFrame(g.body->frameSize, global_);
                for (size_t i = 0; i < args.size(); ++i) fr->slots[i] = coerce(std::move(args[i]), g.sig.params[i]);
                result = runBody(*g.body, std::move(fr), g.sig.ret);
                break;
            }
            case CallInfo::Target::Closure: {
                Value fv = eval(*e.callee);
                std::vector<Value> args = evalArgs(e.args);
                result = callClosure(fv, std::move(args), e.loc);
                break;
            }
            case CallInfo::Target::Builtin: {
                Value a = coerce(eval(*e.args[0]), Type::prim(TypeKind::Double));
                result = Value::dbl(std::sqrt(a.d));
                break;
            }
            case CallInfo::Target::Unresolved:
                fail("R-MM-NONE", e.loc, "unresolved call");
        }
        return coerce(std::move(result), info.result);
    }

    // -----------------------------------------------------------------------
    // Expressions

    struct LRef {
        Value* slot = nullptr;
        std::shared_ptr<Instance> keep;
    };

    Frame* frameAt(int hops) {
        Frame* f = cur_.get();
        while (hops-- > 0) f = f->parent.get();
        return f;
    }

    Value& fieldOf(const std::shared_ptr<Instance>& o, int partition, int index) {
        return o->fields[static_cast<size_t>(partition)][static_cast<size_t>(index)];
    }

    LRef lvalue(Expr& e) {
        switch (e.kind) {
            case ExprKind::Name: {
                auto& n = as<NameExpr>(e);
                switch (n.res.kind) {
                    case Resolution::Kind::Local:
                        return {&frameAt(n.res.hops)->slots[static_cast<size_t>(n.res.index)], nullptr};
                    case Resolution::Kind::Field: {
                        Value self = selfAt(n.res.hops, e.loc);
                        return {&fieldOf(self.obj, n.res.partition, n.res.index), self.obj};
                    }
                    case Resolution::Kind::MetaField:
                        return {&metaStore_[prog_.findImpl(n.res.owner)][static_cast<size_t>(n.res.index)], nullptr};
                    case Resolution::Kind::SingletonField: {
                        auto o = singleton(n.res.owner);
                        return {&fieldOf(o, n.res.partition, n.res.index), o};
                    }
                    default: break;
                }
                break;
            }
            case ExprKind::Member: {
                auto& m = as<MemberExpr>(e);
                if (m.res.kind == MemberRes::Kind::MetaField)
                    return {&metaStore_[prog_.findImpl(m.res.owner)][static_cast<size_t>(m.res.index)], nullptr};
                Value o = strip(eval(*m.object));
                if (o.k != Value::K::Obj)
                    fail("R-NULL", e.loc, fmt::format("field '{}' of a null reference", m.name));
                return {&fieldOf(o.obj, m.res.partition, m.res.index), o.obj};
            }
            case ExprKind::Deref: return lvalue(*as<DerefExpr>(e).operand);
            default: break;
        }
        fail("R-NULL", e.loc, "not assignable");
    }

    Value arith(BinaryOp op, const Value& a, const Value& b, const Type& t, SourceLoc loc) {
        if (t.kind == TypeKind::String) return Value::str(show(a) + show(b));
        if (t.kind == TypeKind::Double) {
            double x = a.k == Value::K::Int ? static_cast<double>(a.i) : a.d;
            double y = b.k == Value::K::Int ? static_cast<double>(b.i) : b.d;
            switch (op) {
                case BinaryOp::Add: return Value::dbl(x + y);
                case BinaryOp::Sub: return Value::dbl(x - y);
                case BinaryOp::Mul: return Value::dbl(x * y);
                case BinaryOp::Div: return Value::dbl(x / y);
                default: break;
            }
        }
        long long x = a.i, y = b.i;
        switch (op) {
            case BinaryOp::Add: return Value::integer(wrapAdd(x, y));
            case BinaryOp::Sub: return Value::integer(wrapSub(x, y));
            case BinaryOp::Mul: return Value::integer(wrapMul(x, y));
            case BinaryOp::Div:
            case BinaryOp::Mod:
                if (y == 0) fail("R-DIV-ZERO", loc, "integer division by zero");
                if (y == -1) return Value::integer(op == BinaryOp::Div ? wrapSub(0, x) : 0);
                return Value::integer(op == BinaryOp::Div ? x / y : x % y);
            default: break;
        }
        return Value::unit();
    }

    static int compare(const Value& a, const Value& b) {
        if (a.k == Value::K::String) return a.s < b.s ? -1 : (a.s == b.s ? 0 : 1);
        if (a.k == Value::K::Int && b.k == Value::K::Int) return a.i < b.i ? -1 : (a.i == b.i ? 0 : 1);
        double x = a.k == Value::K::Int ? static_cast<double>(a.i) : a.d;
        double y = b.k == Value::K::Int ? static_cast<double>(b.i) : b.d;
        return x < y ? -1 : (x == y ? 0 : 1);
    }

    static bool equal(const Value& a, const Value& b) {
        const bool an = a.k == Value::K::Int || a.k == Value::K::Double;
        const bool bn = b.k == Value::K::Int || b.k == Value::K::Double;
        if (an && bn) return compare(a, b) == 0;
        if (a.k == Value::K::Bool && b.k == Value::K::Bool) return a.b == b.b;
        if (a.k == Value::K::String && b.k == Value::K::String) return a.s == b.s;
        return identity(a) == identity(b);
    }

    Value evalBinary(BinaryExpr& e) {
        if (e.op == BinaryOp::And || e.op == BinaryOp::Or) {
            bool a = eval(*e.lhs).b;
            if (e.op == BinaryOp::And ? !a : a) return Value::boolean(a);
            return Value::boolean(eval(*e.rhs).b);
        }
        Value a = eval(*e.lhs);
        Value b = eval(*e.rhs);
        switch (e.op) {
            case BinaryOp::Lt: return Value::boolean(compare(a, b) < 0);
            case BinaryOp::Le: return Value::boolean(compare(a, b) <= 0);
            case BinaryOp::Gt: return Value::boolean(compare(a, b) > 0);
            case BinaryOp::Ge: return Value::boolean(compare(a, b) >= 0);
            case BinaryOp::Eq: return Value::boolean(equal(a, b));
            case BinaryOp::Ne: return Value::boolean(!equal(a, b));
            default: return arith(e.op, a, b, e.type, e.loc);
        }
    }

    Value evalMember(MemberExpr& e) {
        switch (e.res.kind) {
            case MemberRes::Kind::MetaField:
                return metaStore_[prog_.findImpl(e.res.owner)][static_cast<size_t>(e.res.index)];
            case MemberRes::Kind::NestedClass: {
                const ImplDescriptor* d = prog_.findImpl(e.res.owner);
                if (d->isObject) return Value::object(singleton(d->id));
                return Value::metaclass(d);
            }
            case MemberRes::Kind::NestedSlot: {
                Value r = eval(*e.object);
                if (r.k == Value::K::Null)
                    fail("R-NULL", e.loc, fmt::format("'{}' of a null reference", e.name));
                const ImplDescriptor* d = r.obj ? r.obj->desc : r.meta;
                for (const auto& [n, id] : d->nested) {
                    if (n != e.name) continue;
                    const ImplDescriptor* nd = prog_.findImpl(id);
                    Value v = nd->isObject ? Value::object(singleton(id)) : Value::metaclass(nd);
                    return toFat(v, e.res.owner);
                }
                fail("R-MM-NONE", e.loc, fmt::format("'{}' exports no '{}'", d->id, e.name));
            }
            case MemberRes::Kind::Field: {
                Value o = strip(eval(*e.object));
                if (o.k != Value::K::Obj)
                    fail("R-NULL", e.loc, fmt::format("field '{}' of a null reference", e.name));
                return fieldOf(o.obj, e.res.partition, e.res.index);
            }
            case MemberRes::Kind::Unresolved: break;
        }
        fail("R-NULL", e.loc, "unresolved member");
    }

    Value evalName(NameExpr& n) {
        switch (n.res.kind) {
            case Resolution::Kind::Singleton: return Value::object(singleton(n.res.owner));
            case Resolution::Kind::Metaclass: return Value::metaclass(prog_.findImpl(n.res.owner));
            default: return *lvalue(n).slot;
        }
    }

    Value eval(Expr& e) {
        switch (e.kind) {
            case ExprKind::IntLit: return Value::integer(as<IntLit>(e).value);
            case ExprKind::DoubleLit: return Value::dbl(as<DoubleLit>(e).value);
            case ExprKind::BoolLit: return Value::boolean(as<BoolLit>(e).value);
            case ExprKind::StringLit: return Value::str(as<StringLit>(e).value);
            case ExprKind::Name: return evalName(as<NameExpr>(e));
            case ExprKind::This: return selfAt(as<ThisExpr>(e).hops, e.loc);
            case ExprKind::Deref: return eval(*as<DerefExpr>(e).operand);
            case ExprKind::Member: return evalMember(as<MemberExpr>(e));
            case ExprKind::Call: return evalCall(as<CallExpr>(e));
            case ExprKind::New: {
                auto& n = as<NewExpr>(e);
                const ImplDescriptor* d = prog_.findImpl(n.classId);
                std::vector<Value> args = evalArgs(n.args);
                const Family* f = d->family(n.info.family);
                int m = chooseOverload(*f, args, n.info.staticMethod, true, e.loc, d->id + ".new");
                return invokeMeta(d, m, std::move(args), e.loc);
            }
            case ExprKind::Unary: {
                auto& u = as<UnaryExpr>(e);
                Value v = eval(*u.operand);
                if (u.op == UnaryOp::Not) return Value::boolean(!v.b);
                if (v.k == Value::K::Double) return Value::dbl(-v.d);
                return Value::integer(wrapSub(0, v.i));
            }
            case ExprKind::Binary: return evalBinary(as<BinaryExpr>(e));
            case ExprKind::Assign: {
                auto& a = as<AssignExpr>(e);
                LRef ref = lvalue(*a.target);
                Value v = eval(*a.value);
                if (a.op != AssignOp::Set) {
                    BinaryOp op = a.op == AssignOp::Add   ? BinaryOp::Add
                                  : a.op == AssignOp::Sub ? BinaryOp::Sub
                                  : a.op == AssignOp::Mul ? BinaryOp::Mul
                                                          : BinaryOp::Div;
                    v = arith(op, *ref.slot, v, a.target->type, e.loc);
                }
                *ref.slot = coerce(std::move(v), a.target->type);
                return *ref.slot;
            }
            case ExprKind::IncDec: {
                auto& x = as<IncDecExpr>(e);
                LRef ref = lvalue(*x.target);
                Value old = *ref.slot;
                Value nv = old.k == Value::K::Double ? Value::dbl(old.d + (x.increment ? 1 : -1))
                                                     : Value::integer(wrapAdd(old.i, x.increment ? 1 : -1));
                *ref.slot = nv;
                return x.prefix ? nv : old;
            }
            case ExprKind::Conditional: {
                auto& c = as<ConditionalExpr>(e);
                Value v = eval(*c.cond).b ? eval(*c.then) : eval(*c.otherwise);
                return coerce(std::move(v), e.type);
            }
            case ExprKind::RenameCast: {
                auto& r = as<RenameCastExpr>(e);
                Value v = strip(eval(*r.operand));
                if (v.k == Value::K::Null) return v;
                Value view;
                view.k = Value::K::View;
                view.obj = v.obj;
                view.meta = v.k == Value::K::Meta ? v.meta : nullptr;
                view.renames = &e.type.renames;
                return view;
            }
            case ExprKind::ObjectLit: {
                auto& o = as<ObjectLitExpr>(e);
                const ImplDescriptor* d = prog_.findImpl(o.descriptorId);
                auto inst = instantiate(d, cur_);
                initFields(inst);
                return Value::object(inst);
            }
            case ExprKind::FunLit: {
                Value v;
                v.k = Value::K::Fun;
                v.fn = std::make_shared<Closure>(Closure{&as<FunLitExpr>(e), cur_});
                return v;
            }
        }
        return Value::unit();
    }

    // -----------------------------------------------------------------------
    // Statements

    Flow execStmts(std::vector<StmtPtr>& v) {
        for (auto& s : v) {
            Flow f = exec(*s);
            if (f != Flow::Normal) return f;
        }
        return Flow::Normal;
    }

    void execVarDecl(VarDeclStmt& v) {
        for (auto& d : v.decls) {
            Value val = d.init ? coerce(eval(*d.init), v.type) : defaultFor(v.type);
            cur_->slots[static_cast<size_t>(d.slot)] = std::move(val);
        }
    }

    Flow exec(Stmt& st) {
        switch (st.kind) {
            case StmtKind::Block: {
                auto& b = as<BlockStmt>(st);
                if (b.functionBody) return execStmts(b.stmts);
                return withFrame(newFrame(b.frameSize, cur_), [&] { return execStmts(b.stmts); });
            }
            case StmtKind::VarDecl: execVarDecl(as<VarDeclStmt>(st)); return Flow::Normal;
            case StmtKind::Expr: eval(*as<ExprStmt>(st).expr); return Flow::Normal;
            case StmtKind::If: {
                auto& s = as<IfStmt>(st);
                if (eval(*s.cond).b) return exec(*s.then);
                if (s.otherwise) return exec(*s.otherwise);
                return Flow::Normal;
            }
            case StmtKind::While: {
                auto& s = as<WhileStmt>(st);
                while (eval(*s.cond).b) {
                    Flow f = exec(*s.body);
                    if (f == Flow::Break) break;
                    if (f == Flow::Return) return f;
                }
                return Flow::Normal;
            }
            case StmtKind::For: {
                auto& s = as<ForStmt>(st);
                return withFrame(newFrame(s.frameSize, cur_), [&] {
                    if (s.init) exec(*s.init);
                    while (!s.cond || eval(*s.cond).b) {
                        Flow f = exec(*s.body);
                        if (f == Flow::Break) break;
                        if (f == Flow::Return) return f;
                        for (auto& x : s.step) eval(*x);
                    }
                    return Flow::Normal;
                });
            }
            case StmtKind::Return: {
                auto& s = as<ReturnStmt>(st);
                retVal_ = s.value ? coerce(eval(*s.value), s.expected) : Value::unit();
                return Flow::Return;
            }
            case StmtKind::Break: return Flow::Break;
            case StmtKind::Print: {
                Value v = eval(*as<PrintStmt>(st).value);
                out_ << show(v) << '\n';
                return Flow::Normal;
            }
            case StmtKind::Typecase: return execTypecase(as<TypecaseStmt>(st));
            case StmtKind::Empty: return Flow::Normal;
        }
        return Flow::Normal;
    }

    Flow execTypecase(TypecaseStmt& s) {
        Value v = eval(*s.scrutinee);
        if (v.k == Value::K::Null) fail("R-NULL", s.scrutinee->loc, "typecase on a null reference");
        const std::string cls = runtimeClass(v);
        for (auto& arm : s.arms) {
            if (!arm.isDefault && arm.implId != cls) continue;
            Flow f = withFrame(newFrame(arm.frameSize, cur_), [&] {
                if (arm.bindSlot >= 0) cur_->slots[static_cast<size_t>(arm.bindSlot)] = strip(v);
                return execStmts(arm.body);
            });
            return f == Flow::Break ? Flow::Normal : f;
        }
        fail("R-TYPECASE", s.loc,
             fmt::format("no typecase arm matches '{}'", cls.empty() ? std::string("metaclass") : cls));
    }
};

}  // namespace

int select_multimethod(const Family& f, const std::vector<std::string>& classes) {
    for (size_t o = 0; o < f.overloads.size() && o < f.tuples.size(); ++o)
        if (f.tuples[o] == classes) return f.overloads[o];
    return -1;
}

RunResult run_program(const Program& prog, std::ostream& out) {
    Interp in(prog, out);
    return in.run();
}

std::string formatRuntimeError(const RuntimeError& e, const SourceManager& sm) {
    if (e.loc.file < 0) return fmt::format("{}: {}", e.code, e.message);
    return fmt::format("{}: {}:{}:{}: {}", e.code, sm.path(e.loc.file), e.loc.line, e.loc.col, e.message);
}

}  // namespace rom
