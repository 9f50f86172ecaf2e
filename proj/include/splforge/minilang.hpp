#pragma once

// MiniJ: the Java-like input language. Lexer, recursive-descent parser and the
// canonical printer shared by product regeneration and annotated SPL output.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace splforge::minilang {

enum class NodeKind {
    CompilationUnit,
    Import,
    ClassDecl,
    FieldDecl,
    MethodDecl,
    Param,
    Block,
    IfStmt,
    WhileStmt,
    ForStmt,
    ExprStmt,
    ReturnStmt,
};

std::string_view to_string(NodeKind kind) noexcept;
/// Throws Error(InvalidInput) on an unknown name.
NodeKind node_kind_from_string(std::string_view name);

/// Statement kinds take part in twin numbering and sequence merging.
constexpr bool is_statement(NodeKind kind) noexcept {
    return kind == NodeKind::IfStmt || kind == NodeKind::WhileStmt || kind == NodeKind::ForStmt ||
           kind == NodeKind::ExprStmt || kind == NodeKind::ReturnStmt;
}

struct SourceFile {
    std::string path;
    std::string text;

    friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

/// Throws Error(InvalidPath) unless `path` is relative, non-empty, '/'-separated and free of
/// `..` segments.
void validate_relative_path(std::string_view path);

struct AstNode {
    NodeKind kind = NodeKind::CompilationUnit;
    // Single-space-joined tokens of the node's own header or leaf content.
    std::string text;
    std::vector<AstNode> children;

    friend bool operator==(const AstNode&, const AstNode&) = default;
};

enum class TokenKind { Identifier, Number, String, Char, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    int line = 1;
    int column = 1;
};

/// Splits source into tokens, dropping whitespace and comments. The trailing token is End.
std::vector<Token> tokenize(std::string_view text, std::string_view path = {});

/// Parses a whole compilation unit. Throws SyntaxError with line/column.
AstNode parse(const SourceFile& file);

/// Canonical source text: four-space indentation, one statement per line, `else {` on its own
/// line, trailing newline.
std::string print(const AstNode& unit);

/// Renders normalized token text with conventional spacing (`print("x");`). Re-tokenizing the
/// result yields the same tokens.
std::string pretty_tokens(std::string_view normalized);

/// Hooks let callers interleave extra lines (annotation directives) around every node. `depth`
/// is the indentation level of the node's own lines.
struct PrintHooks {
    std::function<void(const AstNode&, int depth, std::vector<std::string>& lines)> before;
    std::function<void(const AstNode&, int depth, std::vector<std::string>& lines)> after;
};

struct PrintedFile {
    std::vector<std::string> lines;
    // 0-based index of each node's first own line. Nodes without own lines (CompilationUnit,
    // Param, body blocks) are absent.
    std::unordered_map<const AstNode*, std::size_t> first_line;
};

PrintedFile print_lines(const AstNode& unit, const PrintHooks* hooks = nullptr);

std::string join_lines(const std::vector<std::string>& lines);

/// Number of nodes in the subtree, including `node`.
std::size_t subtree_size(const AstNode& node);

} // namespace splforge::minilang
