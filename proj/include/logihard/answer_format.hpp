#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace logihard {

using LetterSet = std::vector<char>;  // sorted, unique

LetterSet letters_up_to(int count);  // A, B, ... (count letters)
LetterSet normalize_letters(LetterSet letters);

// "A, B, D"
std::string format_letters(const LetterSet& letters);

struct ParsedAnswer {
    LetterSet letters;
    bool ok = false;         // false: nothing recognizable (parse_failure)
    bool from_fallback = false;
};

struct ParseOptions {
    // Accept run-together letters such as "BD" when every character is a
    // distinct valid letter.
    bool allow_concatenated = true;
};

// Reads the final answer from a free-form response. Lines are scanned from
// last to first; the first line that is nothing but valid letters (after
// emphasis, quotes, trailing punctuation and an optional "Final answer:"
// prefix are stripped) wins. Otherwise the last letter list anywhere in the
// text is used.
ParsedAnswer parse_answer(std::string_view raw, const LetterSet& valid_letters, ParseOptions options = {});

struct AnswerScore {
    bool exact = false;
    double f1 = 0.0;
};

// Throws std::invalid_argument on an empty gold set.
AnswerScore score_response(const LetterSet& predicted, const LetterSet& gold);

}  // namespace logihard
