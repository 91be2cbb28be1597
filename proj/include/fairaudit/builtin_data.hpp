#pragma once

namespace fairaudit::builtin {

// Raw text of the data files shipped with the library, embedded at build
// time. Parsed through the same loaders as user-supplied files.
const char* gender_lexicon_json();
const char* race_lexicon_json();
const char* sentiment_lexicon_text();
const char* target_words_text();

}  // namespace fairaudit::builtin
