#pragma once

#include "rom/checker.hpp"
#include "rom/typesys.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rom::sema {

struct DeclInfo {
    enum class Kind { Interface, Impl, Typedef } kind = Kind::Impl;
    std::string id;  // qualified with enclosing objects: "Motif.ScrollBar"
    const InterfaceDecl* iface = nullptr;
    const ImplDecl* impl = nullptr;
    const TypedefDecl* td = nullptr;
    std::vector<std::string> context;  // enclosing named objects, outermost first
    Access access = Access::Public;    // as a member of its enclosing object
    SourceLoc loc;
    std::optional<Type> typedefType;
    bool resolving = false;
};

struct LocalVar {
    int slot = -1;
    Type type;
};

struct Scope {
    enum class Kind {
        Global,
        Activation,  // method, function or literal call; opens a frame
        Block,       // block, for statement or typecase arm; opens a frame
        Object,      // code lexically inside a named object; no frame
    } kind = Kind::Block;
    std::map<std::string, LocalVar> vars;
    int* slots = nullptr;  // frame size counter
    int ownSlots = 0;

    // Activation. `impl` is set when the activation has a receiver.
    ImplDescriptor* impl = nullptr;
    int part = 0;
    bool meta = false;
    bool isNew = false;
    std::string origin;
    std::string methodName;
    bool hasRet = false;
    Type ret;
    std::vector<std::string> context;  // lexical context for type names

    // Object
    const ImplDecl* objectDecl = nullptr;
    std::string objectId;

    int breakable = 0;

    bool opensFrame() const { return kind != Kind::Object; }
    int alloc() { return slots ? (*slots)++ : ownSlots++; }
};

struct DynamicSite {
    const Family* family = nullptr;
    std::string display;         // "TypeChecker.Visit"
    std::vector<Type> argTypes;  // per dispatched position
    SourceLoc loc;
    bool quiet = false;
};

/// Reference to code whose access rights matter.
struct CodeContext {
    std::string impl;
    std::string origin;
    std::string method;
};

class Sema {
public:
    Sema(const ProgramAst& ast, DiagnosticSink& diags, const CheckOptions& opts);
    std::unique_ptr<Program> run();

private:
    const ProgramAst& ast_;
    DiagnosticSink& diags_;
    CheckOptions opts_;
    std::unique_ptr<Program> prog_;
    TypeSystem ts_;

    std::map<std::string, DeclInfo> decls_;
    std::vector<std::string> declOrder_;
    std::map<std::string, std::vector<int>> functionsByName_;
    std::set<std::string> building_;
    std::map<SourceLoc, int> anonCount_;
    std::vector<DynamicSite> sites_;

    Scope global_;
    std::vector<Scope*> scopes_;
    int breakDepth_ = 0;

    int quiet_ = 0;  // > 0 while re-annotating inherited copies

    void error(const std::string& code, SourceLoc loc, std::string msg) {
        if (!quiet_) diags_.error(code, loc, std::move(msg));
    }
    void warning(const std::string& code, SourceLoc loc, std::string msg) {
        if (!quiet_) diags_.warning(code, loc, std::move(msg));
    }

    // sema_decls.cpp
    void collect();
    void collectImpl(const std::shared_ptr<const ImplDecl>& d, const std::vector<std::string>& ctx,
                     Access access, SourceLoc loc);
    void addDecl(DeclInfo info);
    const DeclInfo* lookupDecl(const std::vector<std::string>& qname,
                               const std::vector<std::string>& ctx) const;
    Type declType(const DeclInfo& d);
    Type resolveType(const TypeSyntax& ts, const std::vector<std::string>& ctx, bool allowSelf,
                     bool allowVoid = false);
    MethodSig resolveSig(const MethodDecl& m, const std::vector<std::string>& ctx, bool allowSelf);
    void buildInterfaces();
    void buildInterface(const std::string& name, std::set<std::string>& active);
    void collectFunctions();

    // elaborator.cpp
    ImplDescriptor* flatten(const std::string& id);
    ImplDescriptor* flattenDecl(std::unique_ptr<ImplDescriptor> desc, const DeclInfo* info);
    int buildPart(ImplDescriptor& d, const ImplDecl* decl, const std::string& declId, int parent,
                  std::vector<std::string> path, std::vector<std::string>& stack);
    void applySharing(ImplDescriptor& d, std::vector<int>& uf);
    void buildTables(ImplDescriptor& d, int part, const std::vector<int>& uf);
    void expandImport(ImplDescriptor& d, int part, const ImportDecl& imp, SourceLoc loc,
                      int partitionHint);
    void buildMeta(ImplDescriptor& d);
    void buildFamilies(ImplDescriptor& d);
    void buildProvided(ImplDescriptor& d);
    void collectFriends(ImplDescriptor& d);
    std::vector<std::string> declContext(const std::string& declId) const;
    std::string descriptorIdForLiteral(const ObjectLitExpr& e);

    // checker_mm.cpp
    void validateFamily(Family& f, const std::vector<const MethodSig*>& sigs,
                        const std::vector<SourceLoc>& locs, const std::string& display);
    void validateAllFamilies(ImplDescriptor& d);
    void validateGlobalFamilies();
    void checkImplements(ImplDescriptor& d);
    void buildSubtypeGraph();
    void checkCompleteness();
    std::string familyDisplay(const Family& f) const;

    // checker.cpp
    void checkDescriptorBodies(ImplDescriptor& d, const std::vector<Scope*>& outer);
    void checkFunctions();
    void checkTopLevel();
    void checkMethodBody(ImplDescriptor& d, MethodImpl& m, const std::vector<Scope*>& outer);
    std::vector<Scope*> lexicalChain(const std::string& declId);
    std::vector<std::unique_ptr<Scope>> objectScopes_;

    void checkBlock(BlockStmt& b);
    void checkStmt(Stmt& s);
    void checkStmts(std::vector<StmtPtr>& v);
    void declareVar(const std::string& name, const Type& t, SourceLoc loc, int& slot);
    void checkTypecase(TypecaseStmt& s);
    Type checkExpr(Expr& e);
    Type checkExprInner(Expr& e);
    Type checkName(NameExpr& e);
    Type checkMember(MemberExpr& e);
    Type checkCall(CallExpr& e);
    Type checkNew(NewExpr& e);
    Type checkBinary(BinaryExpr& e);
    Type checkAssign(AssignExpr& e);
    Type checkObjectLit(ObjectLitExpr& e);
    Type checkFunLit(FunLitExpr& e);
    Type checkRenameCast(RenameCastExpr& e);
    Type checkConditional(ConditionalExpr& e);
    bool checkLvalue(Expr& e);

    /// Checks `from` against `to` at an assignment-like site; true when accepted.
    bool checkAssignment(const Type& to, const Type& from, SourceLoc loc, const std::string& what);
    bool resolveFamilyCall(const Family* fam, const std::string& display,
                           std::vector<ExprPtr>& args, CallInfo& info, SourceLoc loc,
                           const std::string& noMatchCode);
    const std::vector<MethodImpl>* familyMethods(const Family& f) const;
    const MethodSig& overloadSig(const Family& f, int overload) const;
    bool interfaceCall(const std::string& iface, const std::string& name,
                       std::vector<ExprPtr>& args, CallInfo& info, SourceLoc loc);

    Scope* innermostActivation();
    Scope* innermostSelf(int* hops);
    std::vector<CodeContext> codeContexts() const;
    bool accessible(Access access, const std::string& origin, const ImplDescriptor& owner,
                    const std::string& member) const;
    std::vector<std::string> currentContext() const;
    int localHops(size_t scopeIndex) const;
};

std::string familyName(const FamilyKey& k);

}  // namespace rom::sema
