#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vnmatch {

/// Declarative key/value config with [section] headers. Lines are
/// `key = value`; '#' starts a comment; values keep internal spaces.
class IniDoc {
 public:
  static IniDoc parse(std::istream& in) {
    IniDoc doc;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          throw std::runtime_error("config line " + std::to_string(line_no) +
                                   ": unterminated section header");
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        doc.sections_[section];
        continue;
      }
      auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": expected key = value");
      std::string key = trim(trimmed.substr(0, eq));
      std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": empty key");
      doc.sections_[section][key] = value;
    }
    return doc;
  }

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }

  bool has_section(const std::string& section) const {
    return sections_.count(section) > 0;
  }

  std::string get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
      throw std::runtime_error("config: missing " + qualify(section, key));
    return s->second.at(key);
  }

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    return to_double(get(section, key), section, key);
  }
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  long long get_int(const std::string& section, const std::string& key) const {
    return to_int(get(section, key), section, key);
  }
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    try {
      return std::stoull(get(section, key));
    } catch (const std::exception&) {
      throw std::runtime_error("config: " + qualify(section, key) +
                               " is not an unsigned integer");
    }
  }

  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : split_list(get(section, key)))
      out.push_back(to_double(tok, section, key));
    if (out.empty())
      throw std::runtime_error("config: " + qualify(section, key) +
                               " list is empty");
    return out;
  }

  std::vector<int> get_int_list(const std::string& section,
                                const std::string& key) const {
    std::vector<int> out;
    for (const auto& tok : split_list(get(section, key)))
      out.push_back(static_cast<int>(to_int(tok, section, key)));
    if (out.empty())
      throw std::runtime_error("config: " + qualify(section, key) +
                               " list is empty");
    return out;
  }

  /// Matrix value: rows separated by ';', entries by spaces or commas.
  Eigen::MatrixXd get_matrix(const std::string& section,
                             const std::string& key) const {
    std::string text = get(section, key);
    std::vector<std::vector<double>> rows;
    std::stringstream row_stream(text);
    std::string row;
    while (std::getline(row_stream, row, ';')) {
      std::vector<double> entries;
      for (const auto& tok : split_list(row))
        entries.push_back(to_double(tok, section, key));
      if (!entries.empty()) rows.push_back(entries);
    }
    if (rows.empty())
      throw std::runtime_error("config: " + qualify(section, key) +
                               " matrix is empty");
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size())
        throw std::runtime_error("config: " + qualify(section, key) +
                                 " has ragged matrix rows");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
    return m;
  }

 private:
  static std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
  }

  static std::vector<std::string> split_list(const std::string& text) {
    std::string normalized = text;
    for (auto& ch : normalized)
      if (ch == ',') ch = ' ';
    std::istringstream iss(normalized);
    std::vector<std::string> tokens;
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    return tokens;
  }

  static std::string qualify(const std::string& section,
                             const std::string& key) {
    return section.empty() ? key : "[" + section + "] " + key;
  }

  static double to_double(const std::string& tok, const std::string& section,
                          const std::string& key) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("config: " + qualify(section, key) +
                               " is not a number: " + tok);
    }
  }

  static long long to_int(const std::string& tok, const std::string& section,
                          const std::string& key) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("config: " + qualify(section, key) +
                               " is not an integer: " + tok);
    }
  }

  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace vnmatch
