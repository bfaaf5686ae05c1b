#include "embeval/language_id.hpp"

#include <algorithm>
#include <cmath>

#include "embeval/unicode.hpp"

namespace embeval {

namespace {

constexpr std::string_view kGermanSample = R"(
Die Bundesrepublik Deutschland ist ein demokratischer und sozialer Bundesstaat.
Alle Staatsgewalt geht vom Volke aus und wird in Wahlen und Abstimmungen ausgeübt.
Im folgenden Kapitel werden die wichtigsten Ergebnisse der Untersuchung zusammengefasst.
Die Befragung wurde im Frühjahr mit einer repräsentativen Stichprobe durchgeführt.
Es zeigt sich, dass die Zufriedenheit mit der eigenen Arbeit deutlich gestiegen ist.
Nach wie vor bestehen große Unterschiede zwischen den alten und den neuen Bundesländern.
Viele Jugendliche verlassen die Schule ohne einen anerkannten Abschluss.
Die Familie gilt noch immer als wichtigste Quelle der sozialen Unterstützung.
Wir danken allen Teilnehmerinnen und Teilnehmern für ihre Bereitschaft zur Mitarbeit.
Über die Ursachen dieser Entwicklung herrscht in der Forschung keine Einigkeit.
Der Beitrag untersucht, welche Faktoren die Wahlbeteiligung beeinflussen.
Zunächst wird der theoretische Rahmen vorgestellt, danach folgen die Hypothesen.
Die Daten stammen aus einer Längsschnittstudie, die seit mehreren Jahren läuft.
Frauen sind in Führungspositionen weiterhin deutlich unterrepräsentiert.
Die Kommunen stehen vor der Aufgabe, bezahlbaren Wohnraum zu schaffen.
In den Städten wächst die Zahl der Haushalte, während ländliche Regionen schrumpfen.
Die Mehrheit der Befragten lehnt eine weitere Erhöhung der Steuern ab.
Bildung wird häufig als Schlüssel zum gesellschaftlichen Aufstieg bezeichnet.
Auch die Eltern spielen bei der Wahl des Studienfachs eine große Rolle.
Die Arbeitslosigkeit ist im Vergleich zum Vorjahr leicht zurückgegangen.
Ältere Menschen nutzen das Internet seltener als jüngere Altersgruppen.
Die Ergebnisse sollten jedoch mit Vorsicht interpretiert werden.
Dieser Zusammenhang bleibt auch unter Kontrolle weiterer Merkmale bestehen.
Zwischen Einkommen und Gesundheit besteht ein enger Zusammenhang.
Das Vertrauen in politische Institutionen ist in den letzten Jahren gesunken.
Die Gewerkschaften fordern höhere Löhne und bessere Arbeitsbedingungen.
Migration verändert die Zusammensetzung der Bevölkerung nachhaltig.
Kinder aus armen Familien haben schlechtere Chancen auf einen guten Schulabschluss.
Die Studie stützt sich auf qualitative Interviews mit Expertinnen und Experten.
Im Mittelpunkt der Analyse steht die Frage nach der Gerechtigkeit des Systems.
Welche Rolle spielen die Medien bei der Bildung der öffentlichen Meinung?
Die Reform wurde von den Parteien im Bundestag sehr unterschiedlich bewertet.
Ein großer Teil der Beschäftigten arbeitet inzwischen in Teilzeit.
Die sozialen Netzwerke haben die Kommunikation grundlegend verändert.
Schließlich werden die Grenzen der Untersuchung und offene Fragen diskutiert.
Für die Auswertung wurden verschiedene statistische Verfahren eingesetzt.
Der Staat soll für gleiche Lebensverhältnisse in allen Regionen sorgen.
Das Verhältnis von Arbeit und Freizeit hat sich im Laufe der Zeit gewandelt.
Nicht jeder, der arm ist, empfindet sich auch selbst als arm.
Die Pflege von Angehörigen wird überwiegend von Frauen übernommen.
Es ist davon auszugehen, dass sich dieser Trend in Zukunft fortsetzen wird.
Unsere Gesellschaft wird älter, bunter und zugleich ungleicher.
Das Ziel dieser Arbeit besteht darin, einen Überblick über den Stand der Forschung zu geben.
Hierbei handelt es sich um eine der größten Umfragen ihrer Art in Europa.
Diese Annahme wird durch die vorliegenden Befunde nur teilweise bestätigt.
Man kann nicht behaupten, dass die Politik dieses Problem gelöst hätte.
Wer sich ehrenamtlich engagiert, ist oft auch mit seinem Leben zufriedener.
Die Zahl der Kirchenaustritte ist in diesem Jahrzehnt stark angestiegen.
Zwar wurden einige Fortschritte erzielt, doch bleibt noch viel zu tun.
Seine Thesen wurden von vielen Kollegen scharf kritisiert.
Sie wohnt mit ihrem Mann und zwei Kindern in einer kleinen Wohnung.
Das Buch ist gut geschrieben und auch für Laien verständlich.
Im Gegensatz dazu zeigen die Daten für Österreich ein anderes Bild.
Die Beziehungen zwischen den Generationen sind insgesamt recht stabil.
Darüber hinaus müssen auch die kulturellen Unterschiede berücksichtigt werden.
)";

constexpr std::string_view kEnglishSample = R"(
The United States is a federal republic with a long democratic tradition.
In the following chapter we summarize the main findings of the study.
The survey was conducted in the spring using a representative sample of adults.
It turns out that satisfaction with one's own work has risen considerably.
Large differences still exist between urban and rural areas of the country.
Many young people leave school without a recognized qualification.
The family is still regarded as the most important source of social support.
We would like to thank all participants for their willingness to take part.
There is no agreement among researchers about the causes of this development.
This article examines which factors influence voter turnout in national elections.
First, the theoretical framework is presented, followed by the hypotheses.
The data come from a longitudinal study that has been running for several years.
Women remain clearly underrepresented in leadership positions.
Local governments face the challenge of providing affordable housing.
The number of households is growing in the cities while rural regions shrink.
The majority of respondents reject any further increase in taxes.
Education is often described as the key to upward social mobility.
Parents also play a major role in the choice of a field of study.
Unemployment has fallen slightly compared with the previous year.
Older people use the internet less often than younger age groups.
However, the results should be interpreted with caution.
This relationship holds even when further characteristics are controlled for.
There is a close relationship between income and health.
Trust in political institutions has declined in recent years.
The unions are demanding higher wages and better working conditions.
Migration is changing the composition of the population in lasting ways.
Children from poor families have worse chances of getting a good degree.
The study is based on qualitative interviews with experts from the field.
The analysis focuses on the question of whether the system is fair.
What role do the media play in the formation of public opinion?
The reform was judged very differently by the parties in parliament.
A large share of employees now work part time.
Social networks have fundamentally changed the way we communicate.
Finally, the limitations of the study and open questions are discussed.
Various statistical methods were used for the evaluation.
The state should ensure equal living conditions in all regions.
The relationship between work and leisure has changed over time.
Not everyone who is poor also considers themselves to be poor.
Caring for relatives is mostly done by women.
It can be assumed that this trend will continue in the future.
Our society is becoming older, more diverse and at the same time more unequal.
The aim of this article is to give an overview of the state of research.
This is one of the largest surveys of its kind in Europe.
This assumption is only partly confirmed by the present findings.
One cannot claim that politics has solved this problem.
People who volunteer are often more satisfied with their lives.
The number of people leaving the church rose sharply during this decade.
Although some progress has been made, much remains to be done.
His theses were sharply criticized by many of his colleagues.
She lives with her husband and two children in a small apartment.
The book is well written and easy to understand for a general audience.
In contrast, the data for Canada show a different picture.
Relations between the generations are on the whole quite stable.
In addition, cultural differences must also be taken into account.
)";

double log_prob(const auto& profile, const std::u32string& tri, double vocab) {
  const auto it = profile.counts.find(tri);
  const double c = it == profile.counts.end() ? 0.0 : it->second;
  return std::log((c + 0.5) / (profile.total + 0.5 * vocab));
}

std::vector<std::u32string> trigrams(const std::u32string& text) {
  std::vector<std::u32string> out;
  if (text.size() < 3) return out;
  for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
    auto t = text.substr(i, 3);
    if (t[1] == U' ') continue;  // spans two words
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::string_view builtin_training_text(std::string_view lang) {
  if (lang == "de") return kGermanSample;
  if (lang == "en") return kEnglishSample;
  return {};
}

std::u32string trigram_text(std::string_view line) {
  std::u32string out = U" ";
  for (char32_t cp : unicode::decode(line)) {
    if (unicode::is_letter(cp)) {
      out.push_back(unicode::to_lower(cp));
    } else if (out.back() != U' ') {
      out.push_back(U' ');
    }
  }
  if (out.back() != U' ') out.push_back(U' ');
  return out;
}

TrigramClassifier TrigramClassifier::with_builtin_profiles(double threshold) {
  TrigramClassifier c(threshold);
  c.add_profile("de", kGermanSample);
  c.add_profile("en", kEnglishSample);
  return c;
}

void TrigramClassifier::add_profile(const std::string& lang, std::string_view training_text) {
  auto& p = profiles_[lang];
  for (const auto& t : trigrams(trigram_text(training_text))) {
    p.counts[t] += 1.0;
    p.total += 1.0;
  }
}

std::vector<std::string> TrigramClassifier::languages() const {
  std::vector<std::string> out;
  for (const auto& [lang, p] : profiles_)
    if (allowed_.empty() || std::find(allowed_.begin(), allowed_.end(), lang) != allowed_.end())
      out.push_back(lang);
  return out;
}

LanguageGuess TrigramClassifier::classify(std::string_view line) const {
  const auto grams = trigrams(trigram_text(line));
  const auto langs = languages();
  if (grams.empty() || langs.empty()) return {std::string(kUnknownLanguage), 0.0};

  // Smoothing vocabulary: distinct trigrams across the active profiles.
  std::size_t vocab = 0;
  for (const auto& l : langs) vocab += profiles_.at(l).counts.size();

  std::vector<double> mean_ll;
  for (const auto& l : langs) {
    double ll = 0;
    for (const auto& g : grams) ll += log_prob(profiles_.at(l), g, static_cast<double>(vocab));
    mean_ll.push_back(ll / static_cast<double>(grams.size()));
  }
  const auto best = static_cast<std::size_t>(std::max_element(mean_ll.begin(), mean_ll.end()) - mean_ll.begin());
  double denom = 0;
  for (double m : mean_ll) denom += std::exp(m - mean_ll[best]);
  const double confidence = 1.0 / denom;
  if (confidence < threshold_) return {std::string(kUnknownLanguage), confidence};
  return {langs[best], confidence};
}

}  // namespace embeval
