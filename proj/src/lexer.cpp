#include "rom/lexer.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

namespace rom {

namespace {

const std::unordered_map<std::string_view, Tok>& keywords() {
    static const std::unordered_map<std::string_view, Tok> table = {
        {"interface", Tok::KwInterface}, {"class", Tok::KwClass},
        {"object", Tok::KwObject},       {"meta", Tok::KwMeta},
        {"selftype", Tok::KwSelftype},   {"final", Tok::KwFinal},
        {"abstract", Tok::KwAbstract},   {"virtual", Tok::KwVirtual},
        {"import", Tok::KwImport},       {"only", Tok::KwOnly},
        {"except", Tok::KwExcept},       {"rename", Tok::KwRename},
        {"to", Tok::KwTo},               {"sharing", Tok::KwSharing},
        {"implements", Tok::KwImplements}, {"friend", Tok::KwFriend},
        {"typecase", Tok::KwTypecase},   {"case", Tok::KwCase},
        {"default", Tok::KwDefault},     {"public", Tok::KwPublic},
        {"protected", Tok::KwProtected}, {"private", Tok::KwPrivate},
        {"new", Tok::KwNew},             {"typedef", Tok::KwTypedef},
        {"if", Tok::KwIf},               {"else", Tok::KwElse},
        {"while", Tok::KwWhile},         {"for", Tok::KwFor},
        {"return", Tok::KwReturn},       {"break", Tok::KwBreak},
        {"print", Tok::KwPrint},         {"this", Tok::KwThis},
        {"true", Tok::KwTrue},           {"false", Tok::KwFalse},
        {"int", Tok::KwInt},             {"double", Tok::KwDouble},
        {"bool", Tok::KwBool},           {"string", Tok::KwString},
        {"void", Tok::KwVoid},
    };
    return table;
}

class Lexer {
public:
    Lexer(std::string_view src, int file, DiagnosticSink& diags)
        : src_(src), file_(file), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipTrivia();
            if (pos_ >= src_.size()) break;
            const size_t start = pos_;
            const SourceLoc loc = here();
            const char c = src_[pos_];
            Tok kind;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                auto word = src_.substr(start, pos_ - start);
                auto it = keywords().find(word);
                kind = it == keywords().end() ? Tok::Ident : it->second;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                kind = number();
            } else if (c == '"') {
                if (!string(loc)) continue;
                kind = Tok::StringLit;
            } else {
                auto p = punct();
                if (!p) {
                    diags_.error("E-LEX", loc, fmt::format("unrecognized character '{}'", c));
                    advance();
                    continue;
                }
                kind = *p;
            }
            out.push_back({kind, src_.substr(start, pos_ - start), loc});
        }
        out.push_back({Tok::Eof, src_.substr(src_.size()), here()});
        return out;
    }

private:
    SourceLoc here() const { return {file_, line_, col_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    bool at(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void skipTrivia() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else if (at("//")) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (at("/*")) {
                const SourceLoc loc = here();
                advance();
                advance();
                while (pos_ < src_.size() && !at("*/")) advance();
                if (pos_ >= src_.size()) {
                    diags_.error("E-LEX", loc, "unterminated block comment");
                    return;
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    Tok number() {
        bool isDouble = false;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
        };
        digits();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            isDouble = true;
            advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                isDouble = true;
                while (pos_ < look) advance();
                digits();
            }
        }
        return isDouble ? Tok::DoubleLit : Tok::IntLit;
    }

    bool string(SourceLoc loc) {
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
            advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
            diags_.error("E-LEX", loc, "unterminated string literal");
            return false;
        }
        advance();
        return true;
    }

    std::optional<Tok> punct() {
        struct P {
            std::string_view s;
            Tok t;
        };
        static const P table[] = {
            {"->", Tok::Arrow},     {"::", Tok::ColonColon}, {"==", Tok::EqEq},
            {"!=", Tok::NotEq},     {"<=", Tok::LessEq},     {">=", Tok::GreaterEq},
            {"&&", Tok::AndAnd},    {"||", Tok::OrOr},       {"++", Tok::PlusPlus},
            {"--", Tok::MinusMinus}, {"+=", Tok::PlusAssign}, {"-=", Tok::MinusAssign},
            {"*=", Tok::StarAssign}, {"/=", Tok::SlashAssign}, {"{", Tok::LBrace},
            {"}", Tok::RBrace},     {"(", Tok::LParen},      {")", Tok::RParen},
            {";", Tok::Semi},       {",", Tok::Comma},       {".", Tok::Dot},
            {":", Tok::Colon},      {"?", Tok::Question},    {"+", Tok::Plus},
            {"-", Tok::Minus},      {"*", Tok::Star},        {"/", Tok::Slash},
            {"%", Tok::Percent},    {"!", Tok::Bang},        {"=", Tok::Assign},
            {"<", Tok::Less},       {">", Tok::Greater},     {"&", Tok::Amp},
        };
        for (const auto& p : table) {
            if (at(p.s)) {
                for (size_t i = 0; i < p.s.size(); ++i) advance();
                return p.t;
            }
        }
        return std::nullopt;
    }

    std::string_view src_;
    int file_;
    DiagnosticSink& diags_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::string_view tokName(Tok t) {
    switch (t) {
    case Tok::Eof: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::DoubleLit: return "double literal";
    case Tok::StringLit: return "string literal";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::ColonColon: return "'::'";
    case Tok::Colon: return "':'";
    case Tok::Question: return "'?'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Bang: return "'!'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Less: return "'<'";
    case Tok::LessEq: return "'<='";
    case Tok::Greater: return "'>'";
    case Tok::GreaterEq: return "'>='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Amp: return "'&'";
    case Tok::PlusPlus: return "'++'";
    case Tok::MinusMinus: return "'--'";
    case Tok::PlusAssign: return "'+='";
    case Tok::MinusAssign: return "'-='";
    case Tok::StarAssign: return "'*='";
    case Tok::SlashAssign: return "'/='";
    default: break;
    }
    for (const auto& [word, kind] : keywords())
        if (kind == t) return word;
    return "token";
}

std::vector<Token> tokenize(const SourceManager& sm, int file, DiagnosticSink& diags) {
    return Lexer(sm.file(file).text, file, diags).run();
}

}  // namespace rom
