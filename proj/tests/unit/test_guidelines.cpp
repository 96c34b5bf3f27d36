#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <doctest.h>

#include "vdesc/errors.hpp"
#include "vdesc/guidelines.hpp"

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        auto dir = std::filesystem::temp_directory_path();
        path = (dir / ("vdesc_guidelines_" +
                       std::to_string(::getpid()) + ".txt")).string();
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("guidelines") {

TEST_CASE("default registry has 42 contiguous ids") {
    auto reg = vdesc::GuidelineRegistry::load_default();
    REQUIRE(reg.size() == 42);
    const auto& entries = reg.all();
    std::set<std::string> texts;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        CHECK(entries[i].id == static_cast<int>(i) + 1);
        CHECK_FALSE(entries[i].text.empty());
        texts.insert(entries[i].text);
    }
    CHECK(texts.size() == 42);
    CHECK(reg.all_ids().front() == 1);
    CHECK(reg.all_ids().back() == 42);
}

TEST_CASE("lookup by id") {
    auto reg = vdesc::GuidelineRegistry::load_default();
    CHECK(reg.has_id(1));
    CHECK(reg.has_id(42));
    CHECK_FALSE(reg.has_id(0));
    CHECK_FALSE(reg.has_id(43));
    CHECK(reg.by_id(7).id == 7);
    CHECK(reg.by_id(7).text == reg.all()[6].text);
    CHECK_THROWS_AS(reg.by_id(43), vdesc::InvalidArgument);
    CHECK_THROWS_AS(reg.by_id(-1), vdesc::InvalidArgument);
}

TEST_CASE("subset rendering renumbers consecutively") {
    auto reg = vdesc::GuidelineRegistry::load_default();
    std::string block = reg.render_instruction_block({5, 17, 30});
    std::string expected = "Instructions:";
    expected += "\nInstruction #1. " + reg.by_id(5).text;
    expected += "\nInstruction #2. " + reg.by_id(17).text;
    expected += "\nInstruction #3. " + reg.by_id(30).text;
    CHECK(block == expected);
    CHECK_THROWS_AS(reg.render_instruction_block({}), vdesc::InvalidArgument);
    CHECK_THROWS_AS(reg.render_instruction_block({1, 99}), vdesc::InvalidArgument);
}

TEST_CASE("from_text accepts one guideline per line") {
    auto reg = vdesc::GuidelineRegistry::from_text(
        "Describe the main action.\n"
        "\n"
        "  \t\n"
        "Name the setting.\r\n"
        "Avoid speculation.");
    REQUIRE(reg.size() == 3);
    CHECK(reg.by_id(1).text == "Describe the main action.");
    CHECK(reg.by_id(2).text == "Name the setting.");
    CHECK(reg.by_id(3).text == "Avoid speculation.");
}

TEST_CASE("from_text accepts a JSON array with explicit ids") {
    auto reg = vdesc::GuidelineRegistry::from_text(
        R"([{"id": 7, "text": "Seven."}, {"id": 3, "text": "Three.", "source_tags": ["x"]}])");
    REQUIRE(reg.size() == 2);
    CHECK(reg.all()[0].id == 7);
    CHECK(reg.all()[1].id == 3);
    CHECK(reg.by_id(3).source_tags == std::vector<std::string>{"x"});
    CHECK(reg.all_ids() == std::vector<int>{7, 3});
}

TEST_CASE("from_text rejects malformed input") {
    namespace v = vdesc;
    CHECK_THROWS_AS(v::GuidelineRegistry::from_text(""), v::InvalidArgument);
    CHECK_THROWS_AS(v::GuidelineRegistry::from_text("  \n \n"), v::InvalidArgument);
    CHECK_THROWS_AS(v::GuidelineRegistry::from_text("[{\"id\": 1}]"),
                    v::InvalidArgument);
    CHECK_THROWS_AS(v::GuidelineRegistry::from_text("[1, 2]"), v::InvalidArgument);
    CHECK_THROWS_AS(
        v::GuidelineRegistry::from_text(R"([{"id": 0, "text": "x"}])"),
        v::InvalidArgument);
    CHECK_THROWS_AS(
        v::GuidelineRegistry::from_text(R"([{"id": 2, "text": ""}])"),
        v::InvalidArgument);
    CHECK_THROWS_AS(
        v::GuidelineRegistry::from_text(
            R"([{"id": 2, "text": "a"}, {"id": 2, "text": "b"}])"),
        v::InvalidArgument);
    CHECK_THROWS_AS(v::GuidelineRegistry::from_text("[{\"id\": 1,"),
                    v::InvalidArgument);
}

TEST_CASE("from_file round-trips through from_text") {
    TempFile file("Alpha.\nBeta.\n");
    auto reg = vdesc::GuidelineRegistry::from_file(file.path);
    REQUIRE(reg.size() == 2);
    CHECK(reg.by_id(2).text == "Beta.");
    CHECK(reg.content_hash() ==
          vdesc::GuidelineRegistry::from_text("Alpha.\nBeta.\n").content_hash());
    CHECK_THROWS_AS(vdesc::GuidelineRegistry::from_file(file.path + ".missing"),
                    vdesc::IoError);
}

TEST_CASE("content hash is stable and content-sensitive") {
    auto a = vdesc::GuidelineRegistry::load_default();
    auto b = vdesc::GuidelineRegistry::load_default();
    CHECK(a.content_hash() == b.content_hash());
    CHECK(a.content_hash() != 0);

    auto one = vdesc::GuidelineRegistry::from_text("Rule.");
    auto other = vdesc::GuidelineRegistry::from_text("Rule!");
    auto renumbered = vdesc::GuidelineRegistry::from_text(R"([{"id": 2, "text": "Rule."}])");
    CHECK(one.content_hash() != other.content_hash());
    CHECK(one.content_hash() != renumbered.content_hash());
    CHECK(one.content_hash() != a.content_hash());
}

}
