#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embeval {

struct LanguageGuess {
  std::string lang;  // "unknown" when below threshold or no letters
  double confidence = 0.0;
};

inline constexpr std::string_view kUnknownLanguage = "unknown";

class LanguageClassifier {
 public:
  virtual ~LanguageClassifier() = default;
  virtual LanguageGuess classify(std::string_view line) const = 0;
};

// Character-trigram naive Bayes over lowercased letter runs padded with
// spaces. Confidence is the best language's share of the per-trigram
// geometric-mean likelihoods, so it lies in [1/L, 1] for L profiles.
class TrigramClassifier final : public LanguageClassifier {
 public:
  explicit TrigramClassifier(double threshold = 0.55) : threshold_(threshold) {}

  // German and English profiles trained on bundled text.
  static TrigramClassifier with_builtin_profiles(double threshold = 0.55);

  // Adds (or extends) a language profile from sample text.
  void add_profile(const std::string& lang, std::string_view training_text);

  // Restricts classification to the given languages (empty = all profiles).
  void restrict_to(std::vector<std::string> langs) { allowed_ = std::move(langs); }

  double threshold() const noexcept { return threshold_; }
  std::vector<std::string> languages() const;

  LanguageGuess classify(std::string_view line) const override;

 private:
  struct Profile {
    std::unordered_map<std::u32string, double> counts;
    double total = 0;
  };
  double threshold_;
  std::map<std::string, Profile> profiles_;
  std::vector<std::string> allowed_;
};

// Lowercased letter runs joined by single spaces, with leading and trailing space.
std::u32string trigram_text(std::string_view line);

// Built-in training samples.
std::string_view builtin_training_text(std::string_view lang);

}  // namespace embeval
