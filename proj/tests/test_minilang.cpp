#include <catch_amalgamated.hpp>

#include "splforge/error.hpp"
#include "support.hpp"

using namespace splforge;
using namespace splforge::testing;
using minilang::AstNode;
using minilang::NodeKind;
using minilang::SourceFile;

namespace {

AstNode parse_text(const std::string& text) { return minilang::parse({"T.java", text}); }

void collect(const AstNode& n, std::vector<const AstNode*>& out, NodeKind kind) {
    if (n.kind == kind) out.push_back(&n);
    for (const auto& c : n.children) collect(c, out, kind);
}

void leaf_statements(const AstNode& n, std::vector<std::string>& out) {
    if (n.kind == NodeKind::ExprStmt || n.kind == NodeKind::ReturnStmt) out.push_back(n.text);
    for (const auto& c : n.children) leaf_statements(c, out);
}

int error_line(const std::string& text) {
    try {
        parse_text(text);
    } catch (const SyntaxError& e) {
        return e.line();
    }
    return -1;
}

std::vector<SourceFile> corpus_sources() {
    std::vector<SourceFile> out;
    for (const auto& p : hello_products()) out.insert(out.end(), p.files.begin(), p.files.end());
    out.push_back({"Shapes.java", read_text_file(fixtures_dir() / "minij" / "Shapes.java")});
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        for (const auto& p : corpus::synthesize(corpus::random_family({}, seed), seed)) {
            out.insert(out.end(), p.files.begin(), p.files.end());
        }
    }
    return out;
}

} // namespace

TEST_CASE("single statement program has the shape forced by the grammar", "[minilang]") {
    const auto unit = parse_text(R"(class Welcome { void sayHello(){ print("Hello"); } })");
    REQUIRE(unit.kind == NodeKind::CompilationUnit);
    REQUIRE(unit.children.size() == 1);
    const auto& cls = unit.children[0];
    CHECK(cls.kind == NodeKind::ClassDecl);
    CHECK(cls.text == "class Welcome");
    REQUIRE(cls.children.size() == 1);
    const auto& method = cls.children[0];
    CHECK(method.kind == NodeKind::MethodDecl);
    CHECK(method.text == "void sayHello ( )");
    REQUIRE(method.children.size() == 1);
    const auto& body = method.children[0];
    CHECK(body.kind == NodeKind::Block);
    REQUIRE(body.children.size() == 1);
    CHECK(body.children[0].kind == NodeKind::ExprStmt);
    CHECK(body.children[0].text == R"(print ( "Hello" ) ;)");
    CHECK(body.children[0].children.empty());
}

TEST_CASE("an empty file is rejected", "[minilang]") {
    CHECK_THROWS_AS(parse_text(""), SyntaxError);
    CHECK_THROWS_AS(parse_text("// only a comment\n"), SyntaxError);
}

TEST_CASE("the two blank appends of Pz are distinct nodes with equal text", "[minilang]") {
    const auto pz = hello_products()[2];
    const auto unit = minilang::parse(pz.files.at(0));
    std::vector<const AstNode*> statements;
    collect(unit, statements, NodeKind::ExprStmt);
    std::vector<const AstNode*> blanks;
    for (const auto* s : statements) {
        if (s->text == R"(s = s + " " ;)") blanks.push_back(s);
    }
    REQUIRE(blanks.size() == 2);
    CHECK(blanks[0] != blanks[1]);
    CHECK(*blanks[0] == *blanks[1]);
}

TEST_CASE("printing Pz matches the golden file", "[minilang]") {
    const auto pz = hello_products()[2];
    const auto printed = minilang::print(minilang::parse(pz.files.at(0)));
    CHECK(printed == read_text_file(fixtures_dir() / "hello" / "Pz.golden.java"));
}

TEST_CASE("node kinds cover the grammar", "[minilang]") {
    const auto unit = minilang::parse({"Shapes.java", read_text_file(fixtures_dir() / "minij" / "Shapes.java")});
    std::vector<const AstNode*> found;
    for (auto kind : {NodeKind::Import, NodeKind::ClassDecl, NodeKind::FieldDecl, NodeKind::MethodDecl, NodeKind::Param,
                      NodeKind::Block, NodeKind::IfStmt, NodeKind::WhileStmt, NodeKind::ForStmt, NodeKind::ExprStmt,
                      NodeKind::ReturnStmt}) {
        found.clear();
        collect(unit, found, kind);
        INFO(minilang::to_string(kind));
        CHECK(!found.empty());
    }
    found.clear();
    collect(unit, found, NodeKind::IfStmt);
    REQUIRE(found.size() == 1);
    REQUIRE(found[0]->children.size() == 2);
    CHECK(found[0]->children[0].text.empty());
    CHECK(found[0]->children[1].text == "else");
    found.clear();
    collect(unit, found, NodeKind::Param);
    CHECK(found.size() == 4);
    CHECK(found[0]->text == "int w");
}

TEST_CASE("comments are skipped and literals kept byte-exact", "[minilang]") {
    const auto a = parse_text("class A { void f() { s = \"a  /* b */  c\"; // tail\n } }");
    const auto b = parse_text("class A {\n/* lead */ void f() {\n   s   =   \"a  /* b */  c\"  ;\n}\n}\n");
    CHECK(a == b);
    std::vector<std::string> leaves;
    leaf_statements(a, leaves);
    REQUIRE(leaves.size() == 1);
    CHECK(leaves[0] == "s = \"a  /* b */  c\" ;");
}

TEST_CASE("whitespace-only differences print identically", "[minilang]") {
    const auto a = parse_text("class A{int x=1;int f(int y){if(y>0){return y;}else{return -y;}}}");
    const auto b = parse_text("class A {\n  int x = 1;\n\n  int f( int y ) {\n if (y > 0) { return y; }\n"
                              "  else { return - y ; }\n  }\n}");
    CHECK(minilang::print(a) == minilang::print(b));
}

TEST_CASE("print and parse round-trip over the bundled corpus", "[minilang]") {
    for (const auto& source : corpus_sources()) {
        INFO(source.path);
        const auto tree = minilang::parse(source);
        const auto printed = minilang::print(tree);
        const auto reparsed = minilang::parse({source.path, printed});
        CHECK(reparsed == tree);
        CHECK(minilang::print(reparsed) == printed);
    }
}

TEST_CASE("statement order is preserved", "[minilang]") {
    const auto unit = parse_text("class A { void f() { a(); if (x) { b(); } else { c(); } d(); return e; } }");
    std::vector<std::string> leaves;
    leaf_statements(unit, leaves);
    CHECK(leaves == std::vector<std::string>{"a ( ) ;", "b ( ) ;", "c ( ) ;", "d ( ) ;", "return e ;"});
}

TEST_CASE("canonical layout", "[minilang]") {
    const auto printed = minilang::print(parse_text(
        "import a.b;class A{void f(){if(x){y();}else{z();}while(i<3){i++;}for(int i=0;i<n;i++){g(a[i]);}}}"));
    CHECK(printed == "import a.b;\n"
                     "class A {\n"
                     "    void f() {\n"
                     "        if (x) {\n"
                     "            y();\n"
                     "        }\n"
                     "        else {\n"
                     "            z();\n"
                     "        }\n"
                     "        while (i < 3) {\n"
                     "            i++;\n"
                     "        }\n"
                     "        for (int i = 0; i < n; i++) {\n"
                     "            g(a[i]);\n"
                     "        }\n"
                     "    }\n"
                     "}\n");
}

TEST_CASE("print_lines reports the first line of nodes that own lines", "[minilang]") {
    const auto unit = parse_text("class A { int x; void f() { a(); } }");
    const auto printed = minilang::print_lines(unit);
    REQUIRE(printed.lines.size() == 6);
    const auto& cls = unit.children[0];
    CHECK(printed.first_line.at(&cls) == 0);
    CHECK(printed.first_line.at(&cls.children[0]) == 1);
    CHECK(printed.first_line.at(&cls.children[1]) == 2);
    CHECK(printed.first_line.at(&cls.children[1].children[0].children[0]) == 3);
    CHECK(printed.first_line.count(&unit) == 0);
    CHECK(printed.first_line.count(&cls.children[1].children[0]) == 0);
}

TEST_CASE("syntax errors carry line and column", "[minilang]") {
    CHECK(error_line("class A {\n  void f() {\n    if () { }\n  }\n}") == 3);
    CHECK(error_line("class A {\n  void f() {\n    x = 1\n  }\n}") == 4);
    CHECK(error_line("class A {\n  void f() {\n    x = if;\n  }\n}") == 3);
    CHECK(error_line("class A {\n  void f() {\n    else { }\n  }\n}") == 3);
    CHECK(error_line("class A {\n  void f() {\n    if (x) y();\n  }\n}") == 3);
    CHECK(error_line("class A {\n  void f() {\n    { a(); }\n  }\n}") == 3);
    CHECK(error_line("class A {\n  void f() {\n    ;\n  }\n}") == 3);
    CHECK(error_line("class A { void f() { s = \"open; } }") == 1);
    CHECK(error_line("class A { }\nclass B { }") == 2);
    CHECK(error_line("class A { void f() { a(); }") == 1);
    CHECK(error_line("class A { void f() { g(1, (2); } }") == 1);
    try {
        parse_text("class A {\n  int x = ;\n}");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 11);
        CHECK(e.code() == ErrorCode::SyntaxError);
    }
}

TEST_CASE("relative path validation", "[minilang]") {
    CHECK_NOTHROW(minilang::validate_relative_path("Welcome.java"));
    CHECK_NOTHROW(minilang::validate_relative_path("src/a/B.java"));
    for (const char* bad : {"", "/abs/A.java", "../A.java", "a/../A.java", "a//A.java", "a\\A.java", "a/"}) {
        INFO(bad);
        try {
            minilang::validate_relative_path(bad);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidPath);
        }
    }
}

TEST_CASE("node kind names round-trip", "[minilang]") {
    for (int k = 0; k <= static_cast<int>(NodeKind::ReturnStmt); ++k) {
        const auto kind = static_cast<NodeKind>(k);
        CHECK(minilang::node_kind_from_string(minilang::to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(minilang::node_kind_from_string("Lambda"), Error);
    CHECK(minilang::is_statement(NodeKind::IfStmt));
    CHECK_FALSE(minilang::is_statement(NodeKind::Block));
    CHECK_FALSE(minilang::is_statement(NodeKind::FieldDecl));
}

TEST_CASE("pretty token spacing re-tokenizes to the same tokens", "[minilang]") {
    CHECK(minilang::pretty_tokens(R"(print ( "x" ) ;)") == R"(print("x");)");
    CHECK(minilang::pretty_tokens("a . b ( c , d [ 0 ] ) ;") == "a.b(c, d[0]);");
    for (const auto& source : corpus_sources()) {
        const auto tree = minilang::parse(source);
        std::vector<const AstNode*> all;
        for (auto kind : {NodeKind::ExprStmt, NodeKind::FieldDecl, NodeKind::IfStmt, NodeKind::ForStmt}) {
            collect(tree, all, kind);
        }
        for (const auto* n : all) {
            const auto pretty = minilang::pretty_tokens(n->text);
            CHECK(token_texts(pretty) == token_texts(n->text));
        }
    }
}

TEST_CASE("subtree size counts every node", "[minilang]") {
    const auto unit = parse_text("class A { void f(int a) { if (a) { b(); } } }");
    // unit, class, method, param, block, if, then-block, b();
    CHECK(minilang::subtree_size(unit) == 8);
}
