#include "xenorisk/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/features/embeddings.hpp"

namespace xenorisk::synth {
namespace {

using json = nlohmann::ordered_json;

enum class Kind { Reference, HatefulLow, HatefulHigh, PreSlur, Bot, Unlocated };

bool is_hateful(Kind k) { return k == Kind::HatefulLow || k == Kind::HatefulHigh; }

const std::vector<std::string>& base_words() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> w = {
        "the",    "a",      "to",      "and",     "of",      "in",      "is",      "it",     "you",     "that",
        "we",     "i",      "my",      "our",     "people",  "today",   "news",    "home",   "work",    "family",
        "friends", "good",  "great",   "bad",     "really",  "just",    "think",   "know",   "time",    "day",
        "week",   "stay",   "safe",    "health",  "school",  "city",    "love",    "hope",   "happy",   "sad",
        "new",    "world",  "game",    "music",   "food",    "watch",   "read",    "story",  "government",
        "president", "vote", "state",  "help",    "need",    "want",    "see",     "going",  "right",   "now",
        "still",  "never",  "always",  "maybe",   "why",     "how",     "what",    "who",    "this",    "there",
        "here",   "very",   "so",      "lol",     "omg",     "yes",     "no",      "thanks", "church",  "money",
        "job",    "party",  "weekend", "coffee",  "morning", "tonight", "movie",   "team",   "win",     "lose"};
    static const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    static const char* vowels[] = {"a", "e", "i", "o", "u"};
    // pseudo-words of two syllables plus a coda, enumerated in a fixed order
    for (std::size_t i = 0; w.size() < 240; ++i) {
      const std::size_t a = i % 14, b = (i / 14) % 5, c = (i * 7 + 3) % 14, d = (i / 3) % 5;
      w.push_back(std::string(onsets[a]) + vowels[b] + onsets[c] + vowels[d] + "n");
    }
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
  }();
  return words;
}

const std::vector<std::string>& covid_words() {
  static const std::vector<std::string> w = {"covid", "coronavirus", "pandemic", "outbreak", "wuhan", "epidemic"};
  return w;
}

const std::vector<std::string>& locations() {
  static const std::vector<std::string> l = {
      "Texas",          "California",  "New York, NY", "Ohio",         "Seattle, WA", "Florida",
      "Chicago, IL",    "Georgia",     "Denver, CO",   "Pennsylvania", "Boston, MA",  "Arizona",
      "Nashville, TN",  "Michigan",    "Virginia",     "Portland, OR", "Minnesota",   "Atlanta, GA"};
  return l;
}

const std::vector<std::string>& unusable_locations() {
  static const std::vector<std::string> l = {"", "Earth", "somewhere out there", "the internet", "Narnia"};
  return l;
}

struct Domain {
  std::string host;
  const char* bias;
  const char* factuality;
};

const std::vector<Domain>& low_fact_domains() {
  static const std::vector<Domain> d = {{"dailyoutrage.example", "Extreme-Right", "Questionable-Source"},
                                        {"truthblast.example", "Right", "Low"},
                                        {"patriotwire.example", "Extreme-Right", "Very-Low"},
                                        {"rumormill.example", "Right", "Mixed"}};
  return d;
}

const std::vector<Domain>& reliable_domains() {
  static const std::vector<Domain> d = {{"metroherald.example", "Center", "High"},
                                        {"civicledger.example", "Center-Left", "Very-High"},
                                        {"valleytribune.example", "Center-Right", "Mostly-Factual"},
                                        {"progressnow.example", "Left", "High"}};
  return d;
}

const std::vector<std::string>& unrated_domains() {
  static const std::vector<std::string> d = {"myblog.example", "photos.example", "videohub.example"};
  return d;
}

std::vector<std::string> general_accounts() {
  std::vector<std::string> a;
  for (int i = 0; i < 120; ++i) {
    std::ostringstream s;
    s << "acct" << (i < 10 ? "00" : i < 100 ? "0" : "") << i;
    a.push_back(s.str());
  }
  return a;
}

struct GenTweet {
  Instant timestamp;
  std::string text;
  std::uint64_t retweets = 0;
  std::uint64_t likes = 0;
  std::vector<std::string> urls;
};

struct GenUser {
  Kind kind = Kind::Reference;
  std::string user_id;
  json profile;
  std::vector<GenTweet> tweets;
  std::vector<std::string> follows;
  std::vector<float> profile_vec;
  std::vector<float> tweet_vec;
  double bot_score = 0.0;
};

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[uniform_index(rng, v.size())];
}

std::uint64_t lognormal_count(Rng& rng, double mu, double sigma) {
  std::normal_distribution<double> n(mu, sigma);
  return static_cast<std::uint64_t>(std::floor(std::exp(n(rng))));
}

GenTweet make_tweet(Rng& rng, const SynthSpec& spec, bool shifted, bool pre, bool with_covid,
                    const std::string* slur) {
  const auto& base = base_words();
  const auto& signal = signal_words();
  const std::size_t n_tok = 6 + uniform_index(rng, 13);
  std::vector<std::string> tokens;
  tokens.reserve(n_tok + 4);
  for (std::size_t i = 0; i < n_tok; ++i) {
    if ((shifted && uniform_unit(rng) < spec.lexical_signal) || uniform_unit(rng) < 0.02) {
      tokens.push_back(pick(signal, rng));
    } else {
      tokens.push_back(pick(base, rng));
    }
  }
  if (with_covid || uniform_unit(rng) < 0.25) {
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, tokens.size() + 1)),
                  pick(covid_words(), rng));
  }
  if (slur) tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, tokens.size() + 1)), *slur);
  if (uniform_unit(rng) < 0.1) {
    static const std::vector<std::string> tags = {"#news", "#stayhome", "#covid19", "#weekend", "#truth"};
    tokens.push_back(pick(tags, rng));
  }
  if (uniform_unit(rng) < 0.1) tokens.insert(tokens.begin(), "@friend" + std::to_string(uniform_index(rng, 50)));

  GenTweet t;
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string tok = tokens[i];
    if (i == 0 && tok[0] >= 'a' && tok[0] <= 'z') tok[0] = static_cast<char>(tok[0] - 'a' + 'A');
    if (i) text += ' ';
    text += tok;
  }
  static const char* endings[] = {".", "!", "?", "", "..."};
  text += endings[uniform_index(rng, 5)];

  if (uniform_unit(rng) < 0.3) {
    const double low_share = 0.15 + (shifted ? 0.85 * spec.media_signal : 0.0);
    std::string host;
    if (uniform_unit(rng) < low_share) {
      host = pick(low_fact_domains(), rng).host;
    } else if (uniform_unit(rng) < 0.7) {
      host = pick(reliable_domains(), rng).host;
    } else {
      host = pick(unrated_domains(), rng);
    }
    const std::string url = "https://" + host + "/story/" + std::to_string(uniform_index(rng, 100000));
    t.urls.push_back(url);
    text += ' ' + url;
  }
  t.text = std::move(text);

  const auto window = std::chrono::seconds(90LL * 86400);
  const auto offset = std::chrono::seconds(static_cast<long long>(uniform_index(rng, static_cast<std::size_t>(window.count()))));
  t.timestamp = pre ? spec.split_instant - std::chrono::seconds(1) - offset : spec.split_instant + offset;
  t.retweets = lognormal_count(rng, 0.0, 1.2);
  t.likes = lognormal_count(rng, 1.0, 1.3);
  return t;
}

std::vector<float> gaussian_vector(Rng& rng, std::size_t dim, const std::vector<double>* shift, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<float>(n(rng) + (shift ? scale * (*shift)[i] : 0.0));
  return v;
}

std::vector<double> unit_direction(std::uint64_t seed, std::size_t dim) {
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> u(dim);
  double norm = 0.0;
  for (auto& x : u) {
    x = n(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : u) x /= norm;
  return u;
}

GenUser make_user(Kind kind, std::size_t index, const SynthSpec& spec, const std::vector<std::string>& accounts,
                  const std::vector<double>& profile_dir, const std::vector<double>& tweet_dir) {
  Rng rng(derive_seed(spec.seed, {hash_tag("user"), static_cast<std::uint64_t>(index)}));
  GenUser u;
  u.kind = kind;
  u.user_id = std::to_string(1000000 + index);
  const bool shifted = is_hateful(kind);

  const auto span_days = static_cast<std::size_t>(11 * 365);
  const Instant created = *parse_rfc3339("2008-01-01T00:00:00Z") +
                          std::chrono::seconds(static_cast<long long>(uniform_index(rng, span_days * 86400)));
  std::string description;
  const std::size_t n_desc = 3 + uniform_index(rng, 8);
  for (std::size_t i = 0; i < n_desc; ++i) description += (i ? " " : "") + pick(base_words(), rng);
  const std::string location =
      kind == Kind::Unlocated ? pick(unusable_locations(), rng) : pick(locations(), rng);
  u.profile = json{{"user_id", u.user_id},
                   {"verified", uniform_unit(rng) < 0.05},
                   {"created_at", format_rfc3339(created)},
                   {"followers", lognormal_count(rng, 5.0, 1.5)},
                   {"followings", lognormal_count(rng, 5.5, 1.0)},
                   {"statuses", lognormal_count(rng, 8.0, 1.2)},
                   {"favorites", lognormal_count(rng, 7.0, 1.5)},
                   {"description", description},
                   {"location", location}};

  const auto span_count = [&] { return spec.tweets_min + uniform_index(rng, spec.tweets_max - spec.tweets_min + 1); };
  const std::size_t n_pre = span_count();
  const std::size_t n_post = span_count();
  for (std::size_t i = 0; i < n_pre; ++i) u.tweets.push_back(make_tweet(rng, spec, shifted, true, i == 0, nullptr));
  for (std::size_t i = 0; i < n_post; ++i) u.tweets.push_back(make_tweet(rng, spec, shifted, false, false, nullptr));
  std::size_t n_slur_post = 0;
  if (kind == Kind::HatefulLow) n_slur_post = 2 + uniform_index(rng, 2);
  if (kind == Kind::HatefulHigh) n_slur_post = 4 + uniform_index(rng, 5);
  for (std::size_t i = 0; i < n_slur_post; ++i) {
    u.tweets.push_back(make_tweet(rng, spec, shifted, false, false, &pick(placeholder_slurs(), rng)));
  }
  if (kind == Kind::PreSlur) u.tweets.push_back(make_tweet(rng, spec, false, true, false, &pick(placeholder_slurs(), rng)));

  for (const auto& a : accounts) {
    if (uniform_unit(rng) < 0.08) u.follows.push_back(a);
  }
  const double anchor_p = 0.1 + (shifted ? 0.9 * spec.follow_signal : 0.0);
  for (const auto& a : anchor_accounts()) {
    if (uniform_unit(rng) < anchor_p) u.follows.push_back(a);
  }

  u.profile_vec = gaussian_vector(rng, spec.embed_dim, shifted ? &profile_dir : nullptr, spec.embed_separation);
  u.tweet_vec = gaussian_vector(rng, spec.embed_dim, shifted ? &tweet_dir : nullptr, spec.embed_separation);
  u.bot_score = kind == Kind::Bot ? 0.6 + 0.4 * uniform_unit(rng) : 0.45 * uniform_unit(rng);
  return u;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::string fmt_score(double v) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << v;
  return s.str();
}

}  // namespace

const std::vector<std::string>& signal_words() {
  static const std::vector<std::string> w = {"they",  "them",   "their",  "enemy",  "threat", "invade",
                                             "blame", "filthy", "border", "foreign", "zorvak", "mekrin",
                                             "skalvo", "draxen", "vorlith", "kethra"};
  return w;
}

const std::vector<std::string>& placeholder_slurs() {
  static const std::vector<std::string> w = {"xslura", "xslurb", "xslurc", "xslurd"};
  return w;
}

const std::vector<std::string>& anchor_accounts() {
  static const std::vector<std::string> a = [] {
    std::vector<std::string> out;
    for (int i = 0; i < 20; ++i) out.push_back(std::string("anchor") + (i < 10 ? "0" : "") + std::to_string(i));
    return out;
  }();
  return a;
}

void SynthSpec::validate() const {
  const auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
  };
  prob(lexical_signal, "lexical_signal");
  prob(follow_signal, "follow_signal");
  prob(media_signal, "media_signal");
  if (!(embed_separation >= 0.0) || !std::isfinite(embed_separation)) {
    throw ValidationError("embed_separation must be a finite non-negative number");
  }
  if (n_reference < 2 || n_hateful_low < 2 || n_hateful_high < 2) {
    throw ValidationError("every cohort needs at least 2 users");
  }
  if (tweets_min < 1 || tweets_min > tweets_max) throw ValidationError("need 1 <= tweets_min <= tweets_max");
  if (embed_dim < 1) throw ValidationError("embed_dim must be positive");
}

SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec s;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid synth spec JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("synth spec must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n_reference") s.n_reference = value.get<std::size_t>();
      else if (key == "n_hateful_low") s.n_hateful_low = value.get<std::size_t>();
      else if (key == "n_hateful_high") s.n_hateful_high = value.get<std::size_t>();
      else if (key == "n_preslur") s.n_preslur = value.get<std::size_t>();
      else if (key == "n_bots") s.n_bots = value.get<std::size_t>();
      else if (key == "n_unlocated") s.n_unlocated = value.get<std::size_t>();
      else if (key == "lexical_signal") s.lexical_signal = value.get<double>();
      else if (key == "follow_signal") s.follow_signal = value.get<double>();
      else if (key == "media_signal") s.media_signal = value.get<double>();
      else if (key == "embed_separation") s.embed_separation = value.get<double>();
      else if (key == "tweets_min") s.tweets_min = value.get<std::size_t>();
      else if (key == "tweets_max") s.tweets_max = value.get<std::size_t>();
      else if (key == "embed_dim") s.embed_dim = value.get<std::size_t>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else if (key == "split_instant") {
        const auto t = parse_rfc3339(value.get<std::string>());
        if (!t) throw ValidationError("split_instant is not an RFC 3339 timestamp");
        s.split_instant = *t;
      } else {
        throw ValidationError("unknown synth spec key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid synth spec value: ") + e.what());
  }
  s.validate();
  return s;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synth spec: " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_synth_spec(s.str());
}

std::string synth_spec_json(const SynthSpec& s) {
  const json j = {{"n_reference", s.n_reference},
                  {"n_hateful_low", s.n_hateful_low},
                  {"n_hateful_high", s.n_hateful_high},
                  {"n_preslur", s.n_preslur},
                  {"n_bots", s.n_bots},
                  {"n_unlocated", s.n_unlocated},
                  {"lexical_signal", s.lexical_signal},
                  {"follow_signal", s.follow_signal},
                  {"media_signal", s.media_signal},
                  {"embed_separation", s.embed_separation},
                  {"tweets_min", s.tweets_min},
                  {"tweets_max", s.tweets_max},
                  {"embed_dim", s.embed_dim},
                  {"seed", s.seed},
                  {"split_instant", format_rfc3339(s.split_instant)}};
  return j.dump(2);
}

SynthFiles generate_corpus(const SynthSpec& spec, const std::filesystem::path& dir) {
  spec.validate();
  std::filesystem::create_directories(dir);

  std::vector<Kind> kinds;
  const auto add = [&](Kind k, std::size_t n) { kinds.insert(kinds.end(), n, k); };
  add(Kind::Reference, spec.n_reference);
  add(Kind::HatefulLow, spec.n_hateful_low);
  add(Kind::HatefulHigh, spec.n_hateful_high);
  add(Kind::PreSlur, spec.n_preslur);
  add(Kind::Bot, spec.n_bots);
  add(Kind::Unlocated, spec.n_unlocated);
  {
    Rng rng(derive_seed(spec.seed, {hash_tag("cohort-order")}));
    for (std::size_t i = kinds.size(); i > 1; --i) std::swap(kinds[i - 1], kinds[uniform_index(rng, i)]);
  }

  const auto accounts = general_accounts();
  const auto profile_dir = unit_direction(derive_seed(spec.seed, {hash_tag("direction"), 0}), spec.embed_dim);
  const auto tweet_dir = unit_direction(derive_seed(spec.seed, {hash_tag("direction"), 1}), spec.embed_dim);
  std::vector<GenUser> users(kinds.size());
  parallel_for(kinds.size(), 0, [&](std::size_t i) {
    users[i] = make_user(kinds[i], i, spec, accounts, profile_dir, tweet_dir);
  });

  SynthFiles f;
  f.tweets = dir / "tweets.jsonl";
  f.users = dir / "users.jsonl";
  f.follows = dir / "follows.csv";
  f.profile_embeddings = dir / "profile_embeddings.bin";
  f.tweet_embeddings = dir / "tweet_embeddings.bin";
  f.bot_scores = dir / "bot_scores.csv";
  f.truth = dir / "truth.csv";
  f.slurs = dir / "slurs.lex";
  f.media_ratings = dir / "media_ratings.csv";
  f.n_users = users.size();

  {
    auto out = open_out(f.tweets);
    std::uint64_t next_id = 5000000000ULL;
    for (const auto& u : users) {
      for (const auto& t : u.tweets) {
        const json j = {{"tweet_id", std::to_string(next_id++)}, {"user_id", u.user_id},
                        {"timestamp", format_rfc3339(t.timestamp)}, {"text", t.text},
                        {"retweet_count", t.retweets}, {"like_count", t.likes}, {"urls", t.urls}};
        out << j.dump() << '\n';
        ++f.n_tweets;
      }
    }
  }
  {
    auto out = open_out(f.users);
    for (const auto& u : users) out << u.profile.dump() << '\n';
  }
  {
    auto out = open_out(f.follows);
    csv::write_row(out, {"user_id", "followed_handle"});
    for (const auto& u : users) {
      for (const auto& a : u.follows) csv::write_row(out, {u.user_id, a});
    }
  }
  {
    features::EmbeddingTable profile(spec.embed_dim, features::EmbeddingKey::UserId, "synthetic-gaussian");
    features::EmbeddingTable tweet(spec.embed_dim, features::EmbeddingKey::UserId, "synthetic-gaussian");
    for (const auto& u : users) {
      profile.add(u.user_id, u.profile_vec);
      tweet.add(u.user_id, u.tweet_vec);
    }
    features::write_embeddings(f.profile_embeddings, profile);
    features::write_embeddings(f.tweet_embeddings, tweet);
  }
  {
    auto out = open_out(f.bot_scores);
    csv::write_row(out, {"user_id", "score"});
    for (const auto& u : users) csv::write_row(out, {u.user_id, fmt_score(u.bot_score)});
  }
  {
    auto out = open_out(f.truth);
    csv::write_row(out, {"user_id", "label", "reason"});
    for (const auto& u : users) {
      std::string label = "excluded";
      std::string reason = "none";
      switch (u.kind) {
        case Kind::Reference: label = "reference"; break;
        case Kind::HatefulLow: label = "hateful_low"; break;
        case Kind::HatefulHigh: label = "hateful_high"; break;
        case Kind::PreSlur: reason = "pre_period_slur"; break;
        case Kind::Bot: reason = "bot"; break;
        case Kind::Unlocated: reason = "no_location"; break;
      }
      csv::write_row(out, {u.user_id, label, reason});
    }
  }
  {
    auto out = open_out(f.slurs);
    out << "# placeholder terms standing in for slurs in synthetic corpora\n";
    for (const auto& s : placeholder_slurs()) out << "slur\t" << s << '\n';
  }
  {
    auto out = open_out(f.media_ratings);
    csv::write_row(out, {"domain", "bias", "factuality"});
    for (const auto* list : {&low_fact_domains(), &reliable_domains()}) {
      for (const auto& d : *list) csv::write_row(out, {d.host, d.bias, d.factuality});
    }
  }
  return f;
}

}  // namespace xenorisk::synth
