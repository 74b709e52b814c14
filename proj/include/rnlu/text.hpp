#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rnlu {

// Word tokenizer over UTF-8 text. Tokens are maximal runs of letter/digit
// code points; punctuation and symbols separate tokens. Case handling covers
// ASCII and the Latin-1 supplement (enough for the Portuguese corpora this
// toolkit targets); code points above U+00FF are kept verbatim and treated as
// caseless letters.
//
// Normalization rule: a token that is at least two code points long, contains
// a letter and no lowercase letter is kept verbatim (this is how entity tags
// like ACTOR survive), everything else is lowercased.
std::vector<std::string> tokenize(const std::string& text);

// Same segmentation as tokenize() but tokens keep their original characters.
// Used to recover the original surface of entity matches.
std::vector<std::string> tokenize_preserving(const std::string& text);

// Applies the normalization rule above to one already-segmented token.
std::string normalize_token(const std::string& token);

// Unconditional lowercase of every code point (match keys ignore the
// uppercase-preservation rule).
std::string fold_case(const std::string& token);

// Unconditional uppercase. Dictionary tags are normalized with this.
std::string upper_case(const std::string& token);

// Trims ASCII whitespace at both ends and collapses internal whitespace runs
// to single spaces.
std::string normalize_whitespace(const std::string& text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace rnlu
