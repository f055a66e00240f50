// Internal tokenizer for the s-expression surface syntax. Not installed.
//
// Lexing rules: `;` comments run to end of line; `(` `)` `[` `]` are
// single-character tokens; `?name` is a variable and `:name` a keyword;
// bare digit runs are integers. Symbols may contain `-` except as their
// first character, so the compressed typed-variable form `?j-agent`
// tokenizes as `?j`, `-`, `agent` while `:negative-preconditions` stays
// whole. Identifiers are lowercased. Unknown bytes produce a diagnostic
// and are skipped; the lexer accepts arbitrary input without failing.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "epddl/diagnostics.hpp"

namespace epddl::detail {

enum class TokenKind {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Symbol,
    Keyword,   // text without the leading ':'
    Variable,  // text without the leading '?'
    Integer,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    long value = 0;
    SourceSpan span;
};

struct LexOutput {
    std::vector<Token> tokens;  // always terminated by an End token
    std::vector<Diagnostic> diagnostics;
};

LexOutput lex(std::string_view input, int file_id);

}  // namespace epddl::detail
