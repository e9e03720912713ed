#include "ipl/sequent.hpp"

#include <algorithm>

namespace ipl {

Sequent::Sequent(std::vector<Formula> antecedents, Formula consequent) {
  auto data = std::make_shared<Data>();
  data->antecedents = std::move(antecedents);
  data->consequent = std::move(consequent);
  std::sort(data->antecedents.begin(), data->antecedents.end());
  int length = data->consequent.length();
  std::size_t text_size = data->consequent.text().size() + 3;
  for (const Formula& a : data->antecedents) {
    length += a.length();
    text_size += a.text().size() + 2;
  }
  data->length = length;
  std::string text;
  text.reserve(text_size);
  for (std::size_t i = 0; i < data->antecedents.size(); ++i) {
    if (i > 0) text += ", ";
    text += data->antecedents[i].text();
  }
  if (!data->antecedents.empty()) text += " ";
  text += "|- ";
  text += data->consequent.text();
  data->text = std::move(text);
  data_ = std::move(data);
}

bool Sequent::operator==(const Sequent& other) const {
  if (data_ == other.data_) return true;
  if (!data_ || !other.data_) return false;
  return data_->text == other.data_->text;
}

Sequent Sequent::replace_antecedent(std::size_t position,
                                    const std::vector<Formula>& added) const {
  std::vector<Formula> ants;
  ants.reserve(data_->antecedents.size() - 1 + added.size());
  for (std::size_t i = 0; i < data_->antecedents.size(); ++i) {
    if (i != position) ants.push_back(data_->antecedents[i]);
  }
  ants.insert(ants.end(), added.begin(), added.end());
  return Sequent(std::move(ants), data_->consequent);
}

Sequent Sequent::with_consequent(Formula consequent) const {
  return Sequent(data_->antecedents, std::move(consequent));
}

Sequent Sequent::rename(const std::unordered_map<int, int>& map) const {
  std::vector<Formula> ants;
  ants.reserve(data_->antecedents.size());
  for (const Formula& a : data_->antecedents) ants.push_back(rename_variables(a, map));
  return Sequent(std::move(ants), rename_variables(data_->consequent, map));
}

int sequent_length(const Sequent& s) { return s.length(); }

Sequent parse_sequent(const std::string& text) {
  std::size_t sep = text.find("|-");
  if (sep == std::string::npos)
    throw ParseError("missing '|-' separator", 0);
  std::vector<Formula> ants;
  std::size_t start = 0;
  // Split the antecedent list on top-level commas (the grammar has no other
  // comma), then parse each piece.
  std::string head = text.substr(0, sep);
  while (true) {
    std::size_t comma = head.find(',', start);
    std::string piece = head.substr(start, comma == std::string::npos
                                               ? std::string::npos
                                               : comma - start);
    bool blank = piece.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!blank) {
      ants.push_back(parse_formula(piece));
    } else if (comma != std::string::npos || !ants.empty()) {
      throw ParseError("empty antecedent in sequent", start);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Sequent(std::move(ants), parse_formula(text.substr(sep + 2)));
}

}  // namespace ipl
