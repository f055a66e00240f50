#include "sexpr.hpp"

#include "lexer.hpp"

namespace epddl::detail {

namespace {

constexpr size_t kMaxNestingDepth = 512;

struct Reader {
    const std::vector<Token>& tokens;
    size_t pos = 0;
    std::vector<Diagnostic>& diags;

    const Token& peek() const { return tokens[pos]; }
    const Token& take() { return tokens[pos++]; }

    void error(std::string msg, const SourceSpan& span, const char* code = codes::syntax) {
        diags.push_back({Severity::Error, code, std::move(msg), span});
    }

    // Returns false when the element could not be read (diagnostic emitted).
    bool read_element(SExpr& out, size_t depth) {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::LParen:
                return read_group(out, TokenKind::RParen, SExpr::Kind::List, depth);
            case TokenKind::LBracket:
                return read_group(out, TokenKind::RBracket, SExpr::Kind::Brackets, depth);
            case TokenKind::Symbol:
                out = {SExpr::Kind::Symbol, t.text, 0, {}, t.span};
                take();
                return true;
            case TokenKind::Keyword:
                out = {SExpr::Kind::Keyword, t.text, 0, {}, t.span};
                take();
                return true;
            case TokenKind::Variable:
                out = {SExpr::Kind::Variable, t.text, 0, {}, t.span};
                take();
                return true;
            case TokenKind::Integer:
                out = {SExpr::Kind::Integer, t.text, t.value, {}, t.span};
                take();
                return true;
            case TokenKind::RParen:
            case TokenKind::RBracket:
                error("unmatched closing delimiter", t.span, codes::unbalanced);
                take();
                return false;
            case TokenKind::End:
                return false;
        }
        return false;
    }

    bool read_group(SExpr& out, TokenKind closer, SExpr::Kind kind, size_t depth) {
        const Token& open = take();  // consumes '(' or '['
        out.kind = kind;
        out.span = open.span;
        if (depth >= kMaxNestingDepth) {
            error("expression nested too deeply", open.span);
            skip_to_close(closer);
            return false;
        }
        while (true) {
            const Token& t = peek();
            if (t.kind == closer) {
                out.span.end_line = t.span.end_line;
                out.span.end_col = t.span.end_col;
                take();
                return true;
            }
            if (t.kind == TokenKind::End) {
                error("unbalanced parenthesis: group is never closed", t.span,
                      codes::unbalanced);
                return false;
            }
            if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBracket) {
                // wrong closer; report and treat as closing this group
                error("mismatched closing delimiter", t.span, codes::unbalanced);
                take();
                return false;
            }
            SExpr child;
            if (read_element(child, depth + 1))
                out.items.push_back(std::move(child));
            else if (peek().kind == TokenKind::End)
                return false;
        }
    }

    void skip_to_close(TokenKind closer) {
        int nesting = 0;
        while (peek().kind != TokenKind::End) {
            const Token& t = take();
            if (t.kind == TokenKind::LParen || t.kind == TokenKind::LBracket) ++nesting;
            if (t.kind == closer && nesting-- == 0) return;
        }
    }
};

}  // namespace

ReadOutput read_sexprs(std::string_view input, int file_id) {
    ReadOutput out;
    LexOutput lexed = lex(input, file_id);
    out.diagnostics = std::move(lexed.diagnostics);

    Reader reader{lexed.tokens, 0, out.diagnostics};
    while (reader.peek().kind != TokenKind::End) {
        SExpr form;
        if (reader.read_element(form, 0)) out.forms.push_back(std::move(form));
    }
    return out;
}

}  // namespace epddl::detail
