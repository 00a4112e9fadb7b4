#pragma once

#include "rom/source.hpp"
#include "rom/types.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace rom {

// ---------------------------------------------------------------------------
// Type syntax

enum class PrimKind { Int, Double, Bool, String, Void };

struct TypeSyntax {
    enum class Kind { Prim, Named, Selftype, Function } kind = Kind::Prim;
    PrimKind prim = PrimKind::Void;
    std::vector<std::string> qname;          // Named: `Motif.ScrollBar` -> {Motif, ScrollBar}
    std::vector<TypeSyntax> params;          // Function
    std::shared_ptr<const TypeSyntax> ret;   // Function
    bool reference = false;                  // written with `&` or `*`
    SourceLoc loc;
};

std::string joinQName(const std::vector<std::string>& q, std::string_view sep = ".");

// ---------------------------------------------------------------------------
// Checker annotations stored on expression nodes. Method bodies are cloned for
// every class they are copied into, so each copy carries its own annotations.

enum class MethodSpace { Instance, Meta };

struct FamilyKey {
    MethodSpace space = MethodSpace::Instance;
    int part = -1;  // part-private namespace, or -1 for the class-wide one
    std::string name;
    int arity = 0;

    friend auto operator<=>(const FamilyKey&, const FamilyKey&) = default;
};

struct Resolution {
    enum class Kind {
        Unresolved,
        Local,           // frame slot `index`, `hops` frames up the static chain
        Field,           // instance field of the receiver `hops` method scopes out
        MetaField,       // meta field of class `owner`
        SingletonField,  // field of named object `owner`
        Singleton,       // the named object `owner` itself
        Metaclass,       // the metaclass object of class `owner`
    } kind = Kind::Unresolved;
    int hops = 0;
    int partition = -1;
    int index = -1;
    std::string owner;
};

struct CallInfo {
    enum class Target {
        Unresolved,
        Method,           // explicit receiver expression
        ImplicitMethod,   // receiver found `hops` method scopes out
        SingletonMethod,  // method of enclosing named object `owner`
        GlobalFunction,
        Closure,          // callee evaluates to a function closure
        Builtin,
    } target = Target::Unresolved;
    int hops = 0;
    std::string owner;
    FamilyKey family;
    bool receiverIsInterface = false;
    std::string iface;          // receiver interface name
    int ifaceEntry = -1;        // an interface entry of the family (for the table slot)
    int staticMethod = -1;      // overload fixed at check time, or -1 when dispatched at run time
    std::vector<Type> argTypes;  // coercion target per argument
    std::vector<bool> dispatched;
    Type result;
};

// ---------------------------------------------------------------------------
// Expressions

enum class ExprKind {
    IntLit, DoubleLit, BoolLit, StringLit, Name, This, Deref, Member, Call, New, Unary, Binary,
    Assign, IncDec, Conditional, RenameCast, ObjectLit, FunLit,
};

struct Expr {
    explicit Expr(ExprKind k, SourceLoc l) : kind(k), loc(l) {}
    virtual ~Expr() = default;
    virtual std::unique_ptr<Expr> clone() const = 0;

    ExprKind kind;
    SourceLoc loc;
    Type type;  // static type, set by the checker
};
using ExprPtr = std::unique_ptr<Expr>;

template <class Derived, ExprKind K>
struct ExprNode : Expr {
    static constexpr ExprKind kKind = K;
    explicit ExprNode(SourceLoc l) : Expr(K, l) {}
    std::unique_ptr<Expr> clone() const override;
};

std::vector<ExprPtr> cloneAll(const std::vector<ExprPtr>& v);

struct IntLit : ExprNode<IntLit, ExprKind::IntLit> {
    using ExprNode::ExprNode;
    long long value = 0;
};
struct DoubleLit : ExprNode<DoubleLit, ExprKind::DoubleLit> {
    using ExprNode::ExprNode;
    double value = 0;
    std::string spelling;
};
struct BoolLit : ExprNode<BoolLit, ExprKind::BoolLit> {
    using ExprNode::ExprNode;
    bool value = false;
};
struct StringLit : ExprNode<StringLit, ExprKind::StringLit> {
    using ExprNode::ExprNode;
    std::string value;  // unescaped
};
struct NameExpr : ExprNode<NameExpr, ExprKind::Name> {
    using ExprNode::ExprNode;
    std::string name;
    Resolution res;
};
struct ThisExpr : ExprNode<ThisExpr, ExprKind::This> {
    using ExprNode::ExprNode;
    int hops = 0;
};
struct DerefExpr : ExprNode<DerefExpr, ExprKind::Deref> {
    using ExprNode::ExprNode;
    DerefExpr(const DerefExpr& o);
    ExprPtr operand;
};

struct MemberRes {
    enum class Kind {
        Unresolved,
        Field,         // instance/singleton/closure field at (partition, index)
        MetaField,     // meta field `index` of class `owner`
        NestedClass,   // nested class `owner` of a named object
        NestedSlot,    // nested type exported through an interface reference
    } kind = Kind::Unresolved;
    int partition = -1;
    int index = -1;
    std::string owner;
};

struct MemberExpr : ExprNode<MemberExpr, ExprKind::Member> {
    using ExprNode::ExprNode;
    MemberExpr(const MemberExpr& o);
    ExprPtr object;
    std::string name;
    bool arrow = false;   // written `->`
    bool scope = false;   // written `::`
    MemberRes res;
};
struct CallExpr : ExprNode<CallExpr, ExprKind::Call> {
    using ExprNode::ExprNode;
    CallExpr(const CallExpr& o);
    ExprPtr callee;  // NameExpr, MemberExpr, or any closure-valued expression
    std::vector<ExprPtr> args;
    CallInfo info;
};
struct NewExpr : ExprNode<NewExpr, ExprKind::New> {
    using ExprNode::ExprNode;
    NewExpr(const NewExpr& o);
    std::vector<std::string> qname;
    bool hasArgs = false;  // `new C` vs `new C(...)`
    std::vector<ExprPtr> args;
    std::string classId;
    CallInfo info;
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class AssignOp { Set, Add, Sub, Mul, Div };

std::string_view opSpelling(UnaryOp op);
std::string_view opSpelling(BinaryOp op);
std::string_view opSpelling(AssignOp op);

struct UnaryExpr : ExprNode<UnaryExpr, ExprKind::Unary> {
    using ExprNode::ExprNode;
    UnaryExpr(const UnaryExpr& o);
    UnaryOp op = UnaryOp::Neg;
    ExprPtr operand;
};
struct BinaryExpr : ExprNode<BinaryExpr, ExprKind::Binary> {
    using ExprNode::ExprNode;
    BinaryExpr(const BinaryExpr& o);
    BinaryOp op = BinaryOp::Add;
    ExprPtr lhs, rhs;
};
struct AssignExpr : ExprNode<AssignExpr, ExprKind::Assign> {
    using ExprNode::ExprNode;
    AssignExpr(const AssignExpr& o);
    AssignOp op = AssignOp::Set;
    ExprPtr target, value;
};
struct IncDecExpr : ExprNode<IncDecExpr, ExprKind::IncDec> {
    using ExprNode::ExprNode;
    IncDecExpr(const IncDecExpr& o);
    bool prefix = false;
    bool increment = true;
    ExprPtr target;
};
struct ConditionalExpr : ExprNode<ConditionalExpr, ExprKind::Conditional> {
    using ExprNode::ExprNode;
    ConditionalExpr(const ConditionalExpr& o);
    ExprPtr cond, then, otherwise;
};
struct RenamePair {
    std::string from, to;
    SourceLoc loc;
    friend bool operator==(const RenamePair& a, const RenamePair& b) {
        return a.from == b.from && a.to == b.to;
    }
};
struct RenameCastExpr : ExprNode<RenameCastExpr, ExprKind::RenameCast> {
    using ExprNode::ExprNode;
    RenameCastExpr(const RenameCastExpr& o);
    std::vector<RenamePair> renames;
    ExprPtr operand;
};

struct ImplDecl;
struct Param;
struct BlockStmt;

struct ObjectLitExpr : ExprNode<ObjectLitExpr, ExprKind::ObjectLit> {
    using ExprNode::ExprNode;
    std::shared_ptr<const ImplDecl> decl;  // immutable syntax, shared by clones
    std::string descriptorId;
};

struct FunLitExpr : ExprNode<FunLitExpr, ExprKind::FunLit> {
    using ExprNode::ExprNode;
    FunLitExpr(const FunLitExpr& o);
    TypeSyntax ret;
    std::vector<Param> params;
    std::unique_ptr<BlockStmt> body;
    Type sig;  // resolved function type
    std::vector<Type> paramTypes;
};

// ---------------------------------------------------------------------------
// Statements

enum class StmtKind { Block, VarDecl, Expr, If, While, For, Return, Break, Print, Typecase, Empty };

struct Stmt {
    explicit Stmt(StmtKind k, SourceLoc l) : kind(k), loc(l) {}
    virtual ~Stmt() = default;
    virtual std::unique_ptr<Stmt> clone() const = 0;
    StmtKind kind;
    SourceLoc loc;
};
using StmtPtr = std::unique_ptr<Stmt>;

template <class Derived, StmtKind K>
struct StmtNode : Stmt {
    static constexpr StmtKind kKind = K;
    explicit StmtNode(SourceLoc l) : Stmt(K, l) {}
    std::unique_ptr<Stmt> clone() const override;
};

std::vector<StmtPtr> cloneAll(const std::vector<StmtPtr>& v);

struct BlockStmt : StmtNode<BlockStmt, StmtKind::Block> {
    using StmtNode::StmtNode;
    BlockStmt(const BlockStmt& o);
    std::vector<StmtPtr> stmts;
    int frameSize = 0;          // slots of the frame this block opens
    bool functionBody = false;  // shares the activation frame instead of opening one
};
std::unique_ptr<BlockStmt> cloneBlock(const BlockStmt* b);

struct Declarator {
    std::string name;
    SourceLoc loc;
    ExprPtr init;
    int slot = -1;
};
struct VarDeclStmt : StmtNode<VarDeclStmt, StmtKind::VarDecl> {
    using StmtNode::StmtNode;
    VarDeclStmt(const VarDeclStmt& o);
    TypeSyntax typeSyntax;
    std::vector<Declarator> decls;
    Type type;
};
struct ExprStmt : StmtNode<ExprStmt, StmtKind::Expr> {
    using StmtNode::StmtNode;
    ExprStmt(const ExprStmt& o);
    ExprPtr expr;
};
struct IfStmt : StmtNode<IfStmt, StmtKind::If> {
    using StmtNode::StmtNode;
    IfStmt(const IfStmt& o);
    ExprPtr cond;
    StmtPtr then, otherwise;
};
struct WhileStmt : StmtNode<WhileStmt, StmtKind::While> {
    using StmtNode::StmtNode;
    WhileStmt(const WhileStmt& o);
    ExprPtr cond;
    StmtPtr body;
};
struct ForStmt : StmtNode<ForStmt, StmtKind::For> {
    using StmtNode::StmtNode;
    ForStmt(const ForStmt& o);
    StmtPtr init;  // VarDecl or Expr statement, may be null
    ExprPtr cond;  // may be null
    std::vector<ExprPtr> step;
    StmtPtr body;
    int frameSize = 0;
};
struct ReturnStmt : StmtNode<ReturnStmt, StmtKind::Return> {
    using StmtNode::StmtNode;
    ReturnStmt(const ReturnStmt& o);
    ExprPtr value;
    Type expected;
};
struct BreakStmt : StmtNode<BreakStmt, StmtKind::Break> {
    using StmtNode::StmtNode;
};
struct PrintStmt : StmtNode<PrintStmt, StmtKind::Print> {
    using StmtNode::StmtNode;
    PrintStmt(const PrintStmt& o);
    ExprPtr value;
};
struct TypecaseArm {
    bool isDefault = false;
    std::vector<std::string> qname;
    SourceLoc loc;
    std::vector<StmtPtr> body;
    std::string implId;  // resolved class or object identity
    Type armType;
    int frameSize = 0;
    int bindSlot = -1;   // slot of the retyped scrutinee binding, if any
};
struct TypecaseStmt : StmtNode<TypecaseStmt, StmtKind::Typecase> {
    using StmtNode::StmtNode;
    TypecaseStmt(const TypecaseStmt& o);
    ExprPtr scrutinee;
    std::vector<TypecaseArm> arms;
    std::string bindName;  // scrutinee local retyped inside arms, if any
};
struct EmptyStmt : StmtNode<EmptyStmt, StmtKind::Empty> {
    using StmtNode::StmtNode;
};

// ---------------------------------------------------------------------------
// Declarations (immutable after parsing)

struct Param {
    TypeSyntax type;
    std::string name;  // may be empty in signatures
    SourceLoc loc;
};

struct MemberFilter {
    bool hasOnly = false;
    bool hasExcept = false;
    std::vector<std::string> only;
    std::vector<std::string> except;
    std::vector<RenamePair> renames;
    bool empty() const { return !hasOnly && !hasExcept && renames.empty(); }
};

struct InheritClause {
    enum class Kind { Public, Private, Implements } kind = Kind::Public;
    std::vector<std::string> qname;
    MemberFilter filter;
    SourceLoc loc;
};

struct FieldDecl {
    TypeSyntax type;
    std::string name;
    ExprPtr init;
};

struct MethodDecl {
    TypeSyntax ret;
    std::string name;
    std::string qualifier;  // interface entries `T.m(...)` only
    std::vector<Param> params;
    bool isVirtual = false;
    bool isFinal = false;
    bool isAbstract = false;
    std::unique_ptr<BlockStmt> body;  // null: abstract
    SourceLoc loc;
};

struct ImportDecl {
    std::vector<std::string> qname;
    MemberFilter filter;
};
struct SharingDecl {
    std::vector<std::string> left, right;
};
struct FriendDecl {
    std::vector<std::string> qname;
};

enum class MemberKind { Field, Method, Nested, Import, Sharing, Friend };

struct Member {
    MemberKind kind = MemberKind::Field;
    Access access = Access::Public;
    bool meta = false;
    SourceLoc loc;
    std::variant<FieldDecl, MethodDecl, std::shared_ptr<const ImplDecl>, ImportDecl, SharingDecl,
                 FriendDecl>
        body;

    const FieldDecl& field() const { return std::get<FieldDecl>(body); }
    const MethodDecl& method() const { return std::get<MethodDecl>(body); }
    const ImplDecl& nested() const { return *std::get<std::shared_ptr<const ImplDecl>>(body); }
    const ImportDecl& import() const { return std::get<ImportDecl>(body); }
    const SharingDecl& sharing() const { return std::get<SharingDecl>(body); }
    const FriendDecl& friendDecl() const { return std::get<FriendDecl>(body); }
};

struct ImplDecl {
    bool isObject = false;
    bool anonymous = false;
    std::string name;
    std::vector<InheritClause> clauses;
    std::vector<Member> members;
    SourceLoc loc;
};

struct InterfaceDecl {
    std::string name;
    std::vector<std::vector<std::string>> parents;
    std::vector<MethodDecl> methods;
    std::vector<std::pair<std::string, SourceLoc>> nestedTypes;  // `class T;`
    SourceLoc loc;
};

struct TypedefDecl {
    std::string name;
    TypeSyntax type;
    SourceLoc loc;
};

struct TopDecl {
    std::variant<InterfaceDecl, std::shared_ptr<const ImplDecl>, TypedefDecl, MethodDecl, StmtPtr>
        node;
    SourceLoc loc;
};

struct ProgramAst {
    std::vector<TopDecl> decls;
};

// ---------------------------------------------------------------------------

template <class T>
T& as(Expr& e) {
    return static_cast<T&>(e);
}
template <class T>
const T& as(const Expr& e) {
    return static_cast<const T&>(e);
}
template <class T>
T& as(Stmt& s) {
    return static_cast<T&>(s);
}
template <class T>
const T& as(const Stmt& s) {
    return static_cast<const T&>(s);
}

template <class Derived, ExprKind K>
std::unique_ptr<Expr> ExprNode<Derived, K>::clone() const {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
}
template <class Derived, StmtKind K>
std::unique_ptr<Stmt> StmtNode<Derived, K>::clone() const {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
}

/// Location-free S-expression rendering; equal strings mean structurally
/// equal trees. Used to check the pretty-printer round trip.
std::string ast_sexpr(const ProgramAst& p);

}  // namespace rom
