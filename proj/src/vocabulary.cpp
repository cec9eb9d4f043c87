#include "finlog/vocabulary.hpp"

#include <set>

#include "finlog/errors.hpp"

namespace finlog {

Vocabulary::Vocabulary(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.name.empty())
            throw VocabularyError("empty symbol name");
        if (s.arity < 0)
            throw VocabularyError("negative arity for symbol '" + s.name + "'");
        if (!seen.insert(s.name).second)
            throw VocabularyError("duplicate symbol '" + s.name + "'");
    }
}

Vocabulary Vocabulary::of(std::initializer_list<Symbol> symbols) {
    return Vocabulary(std::vector<Symbol>(symbols));
}

bool Vocabulary::contains(const std::string& name) const {
    return index_of(name).has_value();
}

std::optional<int> Vocabulary::arity_of(const std::string& name) const {
    if (auto i = index_of(name))
        return symbols_[*i].arity;
    return std::nullopt;
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name)
            return i;
    return std::nullopt;
}

bool Vocabulary::subset_of(const Vocabulary& other) const {
    for (const auto& s : symbols_) {
        auto a = other.arity_of(s.name);
        if (!a || *a != s.arity)
            return false;
    }
    return true;
}

bool Vocabulary::disjoint_from(const Vocabulary& other) const {
    for (const auto& s : symbols_)
        if (other.contains(s.name))
            return false;
    return true;
}

Vocabulary Vocabulary::extended_with(const Vocabulary& extra) const {
    if (!disjoint_from(extra))
        throw VocabularyError("symbol clash when extending vocabulary");
    std::vector<Symbol> all = symbols_;
    all.insert(all.end(), extra.symbols().begin(), extra.symbols().end());
    return Vocabulary(std::move(all));
}

}  // namespace finlog
