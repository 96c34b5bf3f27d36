#include <string>
#include <vector>

#include <doctest.h>

#include "vdesc/stemmer.hpp"
#include "vdesc/text_metrics.hpp"

namespace {

struct StemPair {
    const char* word;
    const char* stem;
};

// Hand-checked against the published algorithm's worked examples plus
// suffix-rule edge words.
const StemPair kStemTable[] = {
    {"caresses", "caress"},
    {"ponies", "poni"},
    {"ties", "ti"},
    {"caress", "caress"},
    {"cats", "cat"},
    {"feed", "feed"},
    {"agreed", "agre"},
    {"plastered", "plaster"},
    {"bled", "bled"},
    {"motoring", "motor"},
    {"sing", "sing"},
    {"conflated", "conflat"},
    {"troubled", "troubl"},
    {"sized", "size"},
    {"hopping", "hop"},
    {"tanned", "tan"},
    {"falling", "fall"},
    {"hissing", "hiss"},
    {"fizzed", "fizz"},
    {"failing", "fail"},
    {"filing", "file"},
    {"happy", "happi"},
    {"sky", "sky"},
    {"relational", "relat"},
    {"conditional", "condit"},
    {"rational", "ration"},
    {"valenci", "valenc"},
    {"hesitanci", "hesit"},
    {"digitizer", "digit"},
    {"conformabli", "conform"},
    {"radicalli", "radic"},
    {"differentli", "differ"},
    {"vileli", "vile"},
    {"analogousli", "analog"},
    {"vietnamization", "vietnam"},
    {"predication", "predic"},
    {"operator", "oper"},
    {"feudalism", "feudal"},
    {"decisiveness", "decis"},
    {"hopefulness", "hope"},
    {"callousness", "callous"},
    {"formaliti", "formal"},
    {"sensitiviti", "sensit"},
    {"sensibiliti", "sensibl"},
    {"triplicate", "triplic"},
    {"formative", "form"},
    {"formalize", "formal"},
    {"electriciti", "electr"},
    {"electrical", "electr"},
    {"hopeful", "hope"},
    {"goodness", "good"},
    {"revival", "reviv"},
    {"allowance", "allow"},
    {"inference", "infer"},
    {"airliner", "airlin"},
    {"gyroscopic", "gyroscop"},
    {"adjustable", "adjust"},
    {"defensible", "defens"},
    {"irritant", "irrit"},
    {"replacement", "replac"},
    {"adjustment", "adjust"},
    {"dependent", "depend"},
    {"adoption", "adopt"},
    {"communism", "commun"},
    {"activate", "activ"},
    {"angulariti", "angular"},
    {"homologous", "homolog"},
    {"effective", "effect"},
    {"bowdlerize", "bowdler"},
    {"probate", "probat"},
    {"rate", "rate"},
    {"cease", "ceas"},
    {"controll", "control"},
    {"roll", "roll"},
    {"running", "run"},
    {"walks", "walk"},
    {"walking", "walk"},
    {"walked", "walk"},
    {"talks", "talk"},
    {"talking", "talk"},
    {"talked", "talk"},
    {"slices", "slice"},
    {"slicing", "slice"},
    {"sliced", "slice"},
    {"describes", "describ"},
    {"describing", "describ"},
    {"described", "describ"},
    {"generalizations", "gener"},
    {"oscillators", "oscil"},
    {"explaining", "explain"},
    {"demonstrates", "demonstr"},
    {"demonstration", "demonstr"},
    {"cooking", "cook"},
    {"cooked", "cook"},
    {"kitchen", "kitchen"},
    {"woman", "woman"},
    {"women", "women"},
    {"man", "man"},
    {"men", "men"},
    {"children", "children"},
    {"people", "peopl"},
    {"playing", "plai"},
    {"played", "plai"},
    {"plays", "plai"},
    {"happily", "happili"},
    {"quickly", "quickli"},
    {"carefully", "carefulli"},
    {"curly", "curli"},
    {"is", "i"},
    {"was", "wa"},
    {"are", "ar"},
    {"being", "be"},
    {"been", "been"},
    {"seems", "seem"},
    {"appears", "appear"},
    {"wearing", "wear"},
    {"holds", "hold"},
    {"jumping", "jump"},
    {"stands", "stand"},
    {"standing", "stand"},
    {"speaks", "speak"},
    {"speaking", "speak"},
    {"video", "video"},
    {"videos", "video"},
    {"description", "descript"},
    {"descriptions", "descript"},
    {"accessibility", "access"},
    {"visual", "visual"},
    {"visually", "visual"},
    {"impaired", "impair"},
    {"narration", "narrat"},
    {"narrated", "narrat"},
    {"a", "a"},
    {"i", "i"},
};

}  // namespace

TEST_SUITE("tokenize") {

TEST_CASE("tokenizer lowercases ASCII letters and keeps digits") {
    CHECK(vdesc::tokenize("Hello, World! 123") ==
          vdesc::TokenSequence({"hello", "world", "123"}));
    CHECK(vdesc::tokenize("A man's 4K TV") ==
          vdesc::TokenSequence({"a", "man", "s", "4k", "tv"}));
    CHECK(vdesc::tokenize("") == vdesc::TokenSequence{});
    CHECK(vdesc::tokenize("   \t\n ") == vdesc::TokenSequence{});
    CHECK(vdesc::tokenize("one--two__three") ==
          vdesc::TokenSequence({"one", "two", "three"}));
}

TEST_CASE("non-ASCII bytes are separators") {
    CHECK(vdesc::tokenize("caf\u00e9") == vdesc::TokenSequence({"caf"}));
    CHECK(vdesc::tokenize("na\u00efve") == vdesc::TokenSequence({"na", "ve"}));
    CHECK(vdesc::tokenize("don\u2019t stop") ==
          vdesc::TokenSequence({"don", "t", "stop"}));
    CHECK(vdesc::tokenize("\u201cquoted\u201d words") ==
          vdesc::TokenSequence({"quoted", "words"}));
}

TEST_CASE("tokens are never empty and use a closed alphabet") {
    const char* samples[] = {
        "A man, a plan, a canal: Panama!",
        "  double  spaces  and\ttabs\n",
        "MiXeD CaSe 42 times",
        "\u00e9\u00e9\u00e9",
        "trailing punctuation...",
    };
    for (const char* s : samples) {
        for (const std::string& tok : vdesc::tokenize(s)) {
            REQUIRE(!tok.empty());
            for (char c : tok) {
                bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
                REQUIRE(ok);
            }
        }
    }
}

TEST_CASE("porter stemmer reproduces the frozen table") {
    for (const StemPair& p : kStemTable) {
        CHECK_MESSAGE(vdesc::porter_stem(p.word) == p.stem,
                      "word: ", p.word, " want: ", p.stem, " got: ",
                      vdesc::porter_stem(p.word));
    }
}

TEST_CASE("porter stemmer lowercases and passes nonalphabetic input through") {
    CHECK(vdesc::porter_stem("Running") == vdesc::porter_stem("running"));
    CHECK(vdesc::porter_stem("123") == "123");
    CHECK(vdesc::porter_stem("") == "");
}

}
