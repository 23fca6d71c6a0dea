#include "logihard/answer_format.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <stdexcept>

#include "logihard/common.hpp"

namespace logihard {

LetterSet letters_up_to(int count) {
    LetterSet out;
    for (int k = 0; k < count; ++k) out.push_back(static_cast<char>('A' + k));
    return out;
}

LetterSet normalize_letters(LetterSet letters) {
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    return letters;
}

std::string format_letters(const LetterSet& letters) {
    std::string out;
    for (char c : letters) {
        if (!out.empty()) out += ", ";
        out += c;
    }
    return out;
}

namespace {

bool is_valid(char c, const LetterSet& valid) { return std::binary_search(valid.begin(), valid.end(), c); }

bool is_decoration(char c) {
    switch (c) {
        case '*': case '_': case '`': case '"': case '\'': case '(': case ')': case '[': case ']':
        case '.': case '!': case ':': case '#': case '>': case '-':
            return true;
        default:
            return std::isspace(static_cast<unsigned char>(c)) != 0;
    }
}

std::string strip_decoration(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_decoration(s[b])) ++b;
    while (e > b && is_decoration(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string strip_answer_prefix(std::string line) {
    for (std::string_view prefix : {"final answer is", "final answer", "the answer is", "answer is", "answer"}) {
        if (lower(line).starts_with(prefix)) {
            return strip_decoration(std::string_view(line).substr(prefix.size()));
        }
    }
    return line;
}

// Letters on a line that holds nothing else; empty if the line does not qualify.
LetterSet letters_only_line(std::string_view raw_line, const LetterSet& valid, const ParseOptions& opt) {
    std::string line = strip_answer_prefix(strip_decoration(raw_line));
    for (char& c : line) {
        if (c == ',' || c == ';' || c == '/' || c == '&' || c == '+') c = ' ';
    }
    LetterSet found;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        const std::string token = strip_decoration(std::string_view(line).substr(pos, end - pos));
        pos = end;
        if (token.empty()) continue;
        if (lower(token) == "and") continue;
        if (token.size() > 1 && !opt.allow_concatenated) return {};
        LetterSet token_letters;
        for (char c : token) {
            if (!is_valid(c, valid)) return {};
            token_letters.push_back(c);
        }
        const LetterSet unique_letters = normalize_letters(token_letters);
        if (unique_letters.size() != token_letters.size()) return {};
        found.insert(found.end(), unique_letters.begin(), unique_letters.end());
    }
    return normalize_letters(found);
}

}  // namespace

ParsedAnswer parse_answer(std::string_view raw, const LetterSet& valid_letters_in, ParseOptions options) {
    if (valid_letters_in.empty()) throw std::invalid_argument("parse_answer requires valid letters");
    const LetterSet valid = normalize_letters(valid_letters_in);

    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= raw.size(); ++i) {
        if (i == raw.size() || raw[i] == '\n') {
            lines.push_back(raw.substr(start, i - start));
            start = i + 1;
        }
    }
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        LetterSet letters = letters_only_line(*it, valid, options);
        if (!letters.empty()) return {std::move(letters), true, false};
    }

    static const std::regex list_pattern(R"((?:^|[^A-Za-z])([A-Z](?:\s*(?:,|and|&)\s*[A-Z])*)(?![A-Za-z]))");
    const std::string text(raw);
    LetterSet last;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), list_pattern); it != std::sregex_iterator(); ++it) {
        LetterSet letters;
        bool all_valid = true;
        for (char c : (*it)[1].str()) {
            if (std::isupper(static_cast<unsigned char>(c))) {
                all_valid = all_valid && is_valid(c, valid);
                letters.push_back(c);
            }
        }
        // "and" contributes no uppercase letters, so only list letters remain.
        if (all_valid && !letters.empty()) last = normalize_letters(letters);
    }
    if (!last.empty()) return {std::move(last), true, true};
    return {{}, false, false};
}

AnswerScore score_response(const LetterSet& predicted_in, const LetterSet& gold_in) {
    if (gold_in.empty()) throw std::invalid_argument("score_response: empty gold set");
    const LetterSet predicted = normalize_letters(predicted_in);
    const LetterSet gold = normalize_letters(gold_in);
    AnswerScore s;
    s.exact = predicted == gold;
    if (predicted.empty()) return s;
    LetterSet common;
    std::set_intersection(predicted.begin(), predicted.end(), gold.begin(), gold.end(), std::back_inserter(common));
    s.f1 = 2.0 * static_cast<double>(common.size()) / static_cast<double>(predicted.size() + gold.size());
    return s;
}

}  // namespace logihard
