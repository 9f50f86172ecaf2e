#include "splforge/minilang.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "splforge/error.hpp"

namespace splforge::minilang {

namespace {

constexpr std::array kKindNames = {
    std::string_view("CompilationUnit"), std::string_view("Import"),     std::string_view("ClassDecl"),
    std::string_view("FieldDecl"),       std::string_view("MethodDecl"), std::string_view("Param"),
    std::string_view("Block"),           std::string_view("IfStmt"),     std::string_view("WhileStmt"),
    std::string_view("ForStmt"),         std::string_view("ExprStmt"),   std::string_view("ReturnStmt"),
};

// Longest first so that the lexer can take the first prefix match.
constexpr std::array kPunctuators = {
    std::string_view(">>>="), std::string_view("<<="), std::string_view(">>="), std::string_view(">>>"),
    std::string_view("..."),  std::string_view("->"),  std::string_view("::"),  std::string_view("++"),
    std::string_view("--"),   std::string_view("&&"),  std::string_view("||"),  std::string_view("=="),
    std::string_view("!="),   std::string_view("<="),  std::string_view(">="),  std::string_view("+="),
    std::string_view("-="),   std::string_view("*="),  std::string_view("/="),  std::string_view("%="),
    std::string_view("&="),   std::string_view("|="),  std::string_view("^="),  std::string_view("<<"),
    std::string_view(">>"),   std::string_view("("),   std::string_view(")"),   std::string_view("{"),
    std::string_view("}"),    std::string_view("["),   std::string_view("]"),   std::string_view(";"),
    std::string_view(","),    std::string_view("."),   std::string_view("="),   std::string_view("<"),
    std::string_view(">"),    std::string_view("!"),   std::string_view("~"),   std::string_view("?"),
    std::string_view(":"),    std::string_view("+"),   std::string_view("-"),   std::string_view("*"),
    std::string_view("/"),    std::string_view("&"),   std::string_view("|"),   std::string_view("^"),
    std::string_view("%"),    std::string_view("@"),
};

constexpr std::array kStatementKeywords = {
    std::string_view("if"),     std::string_view("else"),  std::string_view("while"), std::string_view("for"),
    std::string_view("return"), std::string_view("class"), std::string_view("import"),
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_statement_keyword(std::string_view s) {
    return std::find(kStatementKeywords.begin(), kStatementKeywords.end(), s) != kStatementKeywords.end();
}

class Lexer {
public:
    Lexer(std::string_view text, std::string_view path) : text_(text), path_(path) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token tok;
            tok.line = line_;
            tok.column = column_;
            if (pos_ >= text_.size()) {
                tok.kind = TokenKind::End;
                out.push_back(std::move(tok));
                return out;
            }
            const char c = text_[pos_];
            const std::size_t start = pos_;
            if (is_ident_start(c)) {
                while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
                tok.kind = TokenKind::Identifier;
            } else if (is_digit(c)) {
                lex_number();
                tok.kind = TokenKind::Number;
            } else if (c == '"' || c == '\'') {
                lex_quoted(c);
                tok.kind = c == '"' ? TokenKind::String : TokenKind::Char;
            } else {
                const auto rest = text_.substr(pos_);
                auto it = std::find_if(kPunctuators.begin(), kPunctuators.end(),
                                       [&](std::string_view p) { return rest.substr(0, p.size()) == p; });
                if (it == kPunctuators.end()) {
                    fail(std::string("unexpected character '") + c + "'");
                }
                for (std::size_t i = 0; i < it->size(); ++i) advance();
                tok.kind = TokenKind::Punct;
            }
            tok.text = std::string(text_.substr(start, pos_ - start));
            out.push_back(std::move(tok));
        }
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw SyntaxError(std::string(path_), line_, column_, message);
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                const int line = line_;
                const int column = column_;
                advance();
                advance();
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
                if (pos_ + 1 >= text_.size()) {
                    throw SyntaxError(std::string(path_), line, column, "unterminated block comment");
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    void lex_number() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (is_ident_char(c)) {
                const bool exponent = (c == 'e' || c == 'E') && pos_ + 1 < text_.size() &&
                                      (text_[pos_ + 1] == '+' || text_[pos_ + 1] == '-');
                advance();
                if (exponent) advance();
            } else if (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1])) {
                advance();
            } else {
                return;
            }
        }
    }

    void lex_quoted(char quote) {
        advance();
        while (pos_ < text_.size() && text_[pos_] != quote) {
            if (text_[pos_] == '\n') fail("newline in literal");
            if (text_[pos_] == '\\') {
                advance();
                if (pos_ >= text_.size()) break;
            }
            advance();
        }
        if (pos_ >= text_.size()) fail("unterminated literal");
        advance();
    }

    std::string_view text_;
    std::string_view path_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

std::string join_tokens(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i != begin) out += ' ';
        out += tokens[i].text;
    }
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string path) : toks_(std::move(tokens)), path_(std::move(path)) {}

    AstNode unit() {
        AstNode root{NodeKind::CompilationUnit, "", {}};
        while (is("import")) root.children.push_back(import_decl());
        if (!is("class")) fail(peek(), "expected 'class' declaration");
        root.children.push_back(class_decl());
        if (peek().kind != TokenKind::End) fail(peek(), "unexpected '" + peek().text + "' after class declaration");
        return root;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }

    bool is(std::string_view text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind != TokenKind::End && t.kind != TokenKind::String && t.kind != TokenKind::Char &&
               t.text == text;
    }

    [[noreturn]] void fail(const Token& at, const std::string& message) const {
        throw SyntaxError(path_, at.line, at.column, message);
    }

    void expect(std::string_view text) {
        if (!is(text)) {
            const Token& t = peek();
            fail(t, "expected '" + std::string(text) + "' but found " +
                        (t.kind == TokenKind::End ? std::string("end of file") : "'" + t.text + "'"));
        }
        ++pos_;
    }

    void expect_identifier(const char* what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier || is_statement_keyword(t.text)) fail(t, std::string("expected ") + what);
        ++pos_;
    }

    AstNode import_decl() {
        const std::size_t begin = pos_;
        expect("import");
        expect_identifier("imported name");
        while (is(".")) {
            ++pos_;
            if (is("*")) {
                ++pos_;
                break;
            }
            expect_identifier("imported name");
        }
        expect(";");
        return {NodeKind::Import, join_tokens(toks_, begin, pos_), {}};
    }

    AstNode class_decl() {
        const std::size_t begin = pos_;
        expect("class");
        expect_identifier("class name");
        AstNode cls{NodeKind::ClassDecl, join_tokens(toks_, begin, pos_), {}};
        expect("{");
        while (!is("}")) {
            if (peek().kind == TokenKind::End) fail(peek(), "unterminated class body");
            cls.children.push_back(member());
        }
        expect("}");
        return cls;
    }

    void type() {
        expect_identifier("type name");
        while (is(".")) {
            ++pos_;
            expect_identifier("type name");
        }
        if (is("<")) {
            int depth = 0;
            do {
                const Token& t = peek();
                if (t.kind == TokenKind::End || t.text == ";" || t.text == "{" || t.text == "}") {
                    fail(t, "unterminated type arguments");
                }
                if (t.kind == TokenKind::Punct) {
                    if (t.text == "<") depth += 1;
                    else if (t.text == ">") depth -= 1;
                    else if (t.text == ">>") depth -= 2;
                    else if (t.text == ">>>") depth -= 3;
                }
                ++pos_;
            } while (depth > 0);
            if (depth < 0) fail(peek(), "unbalanced type arguments");
        }
        while (is("[") && is("]", 1)) pos_ += 2;
        if (is("...")) ++pos_;
    }

    AstNode member() {
        const std::size_t begin = pos_;
        type();
        expect_identifier("member name");
        if (is("(")) {
            ++pos_;
            AstNode method{NodeKind::MethodDecl, "", {}};
            std::vector<AstNode> params;
            if (!is(")")) {
                for (;;) {
                    const std::size_t pbegin = pos_;
                    type();
                    expect_identifier("parameter name");
                    params.push_back({NodeKind::Param, join_tokens(toks_, pbegin, pos_), {}});
                    if (!is(",")) break;
                    ++pos_;
                }
            }
            expect(")");
            method.text = join_tokens(toks_, begin, pos_);
            method.children = std::move(params);
            method.children.push_back(block(""));
            return method;
        }
        if (is("=")) {
            ++pos_;
            expression_until_semicolon();
        }
        expect(";");
        return {NodeKind::FieldDecl, join_tokens(toks_, begin, pos_), {}};
    }

    AstNode block(std::string text) {
        AstNode b{NodeKind::Block, std::move(text), {}};
        expect("{");
        while (!is("}")) {
            if (peek().kind == TokenKind::End) fail(peek(), "unterminated block");
            b.children.push_back(statement());
        }
        expect("}");
        return b;
    }

    AstNode statement() {
        const std::size_t begin = pos_;
        if (is("if")) {
            ++pos_;
            parenthesized(true);
            AstNode node{NodeKind::IfStmt, join_tokens(toks_, begin, pos_), {}};
            node.children.push_back(block(""));
            if (is("else")) {
                ++pos_;
                if (!is("{")) fail(peek(), "else branch requires a block");
                node.children.push_back(block("else"));
            }
            return node;
        }
        if (is("while") || is("for")) {
            const NodeKind kind = is("while") ? NodeKind::WhileStmt : NodeKind::ForStmt;
            ++pos_;
            parenthesized(kind == NodeKind::WhileStmt);
            AstNode node{kind, join_tokens(toks_, begin, pos_), {}};
            node.children.push_back(block(""));
            return node;
        }
        if (is("return")) {
            ++pos_;
            if (!is(";")) expression_until_semicolon();
            expect(";");
            return {NodeKind::ReturnStmt, join_tokens(toks_, begin, pos_), {}};
        }
        if (is("else")) fail(peek(), "'else' without 'if'");
        if (is("{")) fail(peek(), "bare blocks are not supported");
        if (is(";")) fail(peek(), "empty statement");
        expression_until_semicolon();
        expect(";");
        return {NodeKind::ExprStmt, join_tokens(toks_, begin, pos_), {}};
    }

    // Consumes a balanced token run up to (not including) a top-level ';'.
    void expression_until_semicolon() {
        std::vector<std::string_view> stack;
        const std::size_t begin = pos_;
        for (;;) {
            const Token& t = peek();
            if (t.kind == TokenKind::End) fail(t, "expected ';'");
            if (t.kind == TokenKind::Punct) {
                if (stack.empty() && t.text == ";") break;
                if (stack.empty() && t.text == "}") fail(t, "expected ';' before '}'");
                balance(stack, t);
            } else if (stack.empty() && t.kind == TokenKind::Identifier && is_statement_keyword(t.text)) {
                fail(t, "unexpected keyword '" + t.text + "' in expression");
            }
            ++pos_;
        }
        if (pos_ == begin) fail(peek(), "empty expression");
    }

    // '(' balanced-run ')'
    void parenthesized(bool non_empty) {
        expect("(");
        std::vector<std::string_view> stack{")"};
        const std::size_t begin = pos_;
        for (;;) {
            const Token& t = peek();
            if (t.kind == TokenKind::End) fail(t, "expected ')'");
            if (t.kind == TokenKind::Punct) {
                balance(stack, t);
                if (stack.empty()) break;
            }
            ++pos_;
        }
        if (non_empty && pos_ == begin) fail(peek(), "empty condition");
        ++pos_;
    }

    void balance(std::vector<std::string_view>& stack, const Token& t) const {
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            stack.push_back(t.text == "(" ? ")" : t.text == "[" ? "]" : "}");
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
            if (stack.empty() || stack.back() != t.text) fail(t, "unbalanced '" + t.text + "'");
            stack.pop_back();
        }
    }

    std::vector<Token> toks_;
    std::string path_;
    std::size_t pos_ = 0;
};

bool is_keyword_before_paren(std::string_view s) {
    return s == "if" || s == "while" || s == "for" || s == "return" || s == "switch" || s == "catch" ||
           s == "synchronized" || s == "new" || s == "throw" || s == "else";
}

bool needs_space(const Token& a, const Token& b) {
    const bool a_num = a.kind == TokenKind::Number;
    const bool b_num = b.kind == TokenKind::Number;
    const bool a_punct = a.kind == TokenKind::Punct;
    const bool b_punct = b.kind == TokenKind::Punct;
    const bool a_closes = a_punct && (a.text == ")" || a.text == "]");
    const bool a_ident = a.kind == TokenKind::Identifier;

    if (b_punct && (b.text == ")" || b.text == "]" || b.text == ";" || b.text == ",")) return false;
    if (b_punct && b.text == "." && !a_num) return false;
    if (a_punct && (a.text == "(" || a.text == "[")) return false;
    if (a_punct && a.text == "." && !b_num) return false;
    if (b_punct && b.text == "(" && ((a_ident && !is_keyword_before_paren(a.text)) || a_closes)) return false;
    if (b_punct && b.text == "[" && (a_ident || a_closes)) return false;
    if (b_punct && (b.text == "++" || b.text == "--") && (a_ident || a_closes)) return false;
    if (a_punct && a.text == "!" && (b.kind == TokenKind::Identifier || (b_punct && b.text == "("))) return false;
    return true;
}

void emit_line(std::vector<std::string>& lines, int depth, std::string text) {
    lines.push_back(std::string(static_cast<std::size_t>(depth) * 4, ' ') + std::move(text));
}

class Printer {
public:
    explicit Printer(const PrintHooks* hooks) : hooks_(hooks) {}

    PrintedFile run(const AstNode& unit) {
        emit(unit, 0);
        return std::move(out_);
    }

private:
    void own_line(const AstNode& node, int depth, std::string text) {
        out_.first_line.emplace(&node, out_.lines.size());
        emit_line(out_.lines, depth, std::move(text));
    }

    void emit(const AstNode& node, int depth) {
        if (node.kind == NodeKind::Param) return;
        if (hooks_ && hooks_->before) hooks_->before(node, depth, out_.lines);
        switch (node.kind) {
            case NodeKind::CompilationUnit:
                for (const auto& c : node.children) emit(c, depth);
                break;
            case NodeKind::Import:
            case NodeKind::FieldDecl:
            case NodeKind::ExprStmt:
            case NodeKind::ReturnStmt:
                own_line(node, depth, pretty_tokens(node.text));
                break;
            case NodeKind::ClassDecl:
                own_line(node, depth, pretty_tokens(node.text) + " {");
                for (const auto& c : node.children) emit(c, depth + 1);
                emit_line(out_.lines, depth, "}");
                break;
            case NodeKind::MethodDecl:
            case NodeKind::IfStmt:
            case NodeKind::WhileStmt:
            case NodeKind::ForStmt: {
                own_line(node, depth, pretty_tokens(node.text) + " {");
                bool closed = false;
                for (const auto& c : node.children) {
                    if (c.kind != NodeKind::Block) continue;
                    if (c.text.empty()) {
                        emit(c, depth + 1);
                    } else {
                        if (!closed) {
                            emit_line(out_.lines, depth, "}");
                            closed = true;
                        }
                        emit(c, depth);
                    }
                }
                if (!closed) emit_line(out_.lines, depth, "}");
                break;
            }
            case NodeKind::Block:
                if (node.text.empty()) {
                    for (const auto& c : node.children) emit(c, depth);
                } else {
                    own_line(node, depth, pretty_tokens(node.text) + " {");
                    for (const auto& c : node.children) emit(c, depth + 1);
                    emit_line(out_.lines, depth, "}");
                }
                break;
            case NodeKind::Param:
                break;
        }
        if (hooks_ && hooks_->after) hooks_->after(node, depth, out_.lines);
    }

    const PrintHooks* hooks_;
    PrintedFile out_;
};

} // namespace

std::string_view to_string(NodeKind kind) noexcept { return kKindNames[static_cast<std::size_t>(kind)]; }

NodeKind node_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<NodeKind>(i);
    }
    throw Error(ErrorCode::InvalidInput, "unknown node kind '" + std::string(name) + "'");
}

void validate_relative_path(std::string_view path) {
    if (path.empty()) throw Error(ErrorCode::InvalidPath, "empty path");
    if (path.front() == '/' || path.find('\\') != std::string_view::npos) {
        throw Error(ErrorCode::InvalidPath, "path must be relative and '/'-separated: " + std::string(path));
    }
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t end = std::min(path.find('/', start), path.size());
        const auto segment = path.substr(start, end - start);
        if (segment.empty() || segment == "..") {
            throw Error(ErrorCode::InvalidPath, "invalid path segment in " + std::string(path));
        }
        start = end + 1;
    }
}

std::vector<Token> tokenize(std::string_view text, std::string_view path) { return Lexer(text, path).run(); }

AstNode parse(const SourceFile& file) { return Parser(tokenize(file.text, file.path), file.path).unit(); }

std::string pretty_tokens(std::string_view normalized) {
    const auto tokens = tokenize(normalized);
    std::string out;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (i > 0 && needs_space(tokens[i - 1], tokens[i])) out += ' ';
        out += tokens[i].text;
    }
    return out;
}

PrintedFile print_lines(const AstNode& unit, const PrintHooks* hooks) { return Printer(hooks).run(unit); }

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::string print(const AstNode& unit) { return join_lines(print_lines(unit).lines); }

std::size_t subtree_size(const AstNode& node) {
    std::size_t n = 1;
    for (const auto& c : node.children) n += subtree_size(c);
    return n;
}

} // namespace splforge::minilang
