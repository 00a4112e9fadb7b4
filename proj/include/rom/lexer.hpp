#pragma once

#include "rom/diagnostics.hpp"
#include "rom/source.hpp"

#include <string_view>
#include <vector>

namespace rom {

enum class Tok {
    Eof,
    Ident,
    IntLit,
    DoubleLit,
    StringLit,
    // keywords
    KwInterface, KwClass, KwObject, KwMeta, KwSelftype, KwFinal, KwAbstract, KwVirtual,
    KwImport, KwOnly, KwExcept, KwRename, KwTo, KwSharing, KwImplements, KwFriend,
    KwTypecase, KwCase, KwDefault, KwPublic, KwProtected, KwPrivate, KwNew, KwTypedef,
    KwIf, KwElse, KwWhile, KwFor, KwReturn, KwBreak, KwPrint, KwThis, KwTrue, KwFalse,
    KwInt, KwDouble, KwBool, KwString, KwVoid,
    // punctuation
    LBrace, RBrace, LParen, RParen, Semi, Comma, Dot, Arrow, ColonColon, Colon, Question,
    Plus, Minus, Star, Slash, Percent, Bang, Assign, EqEq, NotEq, Less, LessEq, Greater,
    GreaterEq, AndAnd, OrOr, Amp, PlusPlus, MinusMinus, PlusAssign, MinusAssign, StarAssign,
    SlashAssign,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string_view text;  // slice of the owning SourceFile's text
    SourceLoc loc;
};

/// Display name used in parse diagnostics ("'{'", "identifier", ...).
std::string_view tokName(Tok t);

/// Always ends with an Eof token. Unrecognized characters are reported as
/// E-LEX and skipped so later phases still see a well-formed stream.
std::vector<Token> tokenize(const SourceManager& sm, int file, DiagnosticSink& diags);

}  // namespace rom
