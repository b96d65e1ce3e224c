#include "laundergraph/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string_view>

#include <nlohmann/json.hpp>

#include "laundergraph/error.hpp"
#include "laundergraph/reports.hpp"

namespace laundergraph {

namespace {

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kYearStart = 1325376000;  // 2012-01-01T00:00:00Z
constexpr std::int64_t kYearDays = 366;

struct Country {
    std::string_view code;
    std::string_view currency;
    double weight;
};

constexpr std::array<Country, 10> kCountries{{
    {"AU", "AUD", 0.55}, {"CN", "CNY", 0.08}, {"GB", "GBP", 0.07}, {"US", "USD", 0.07}, {"NZ", "NZD", 0.05},
    {"HK", "HKD", 0.04}, {"SG", "SGD", 0.04}, {"IN", "INR", 0.04}, {"VN", "VND", 0.03}, {"PH", "PHP", 0.03},
}};

std::string_view currency_of(std::string_view country) {
    for (const auto& c : kCountries) {
        if (c.code == country) return c.currency;
    }
    return "USD";
}

std::string padded(char prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, value);
    return buf;
}

enum class Role : std::uint8_t { core, cluster, group };

class Generator {
public:
    explicit Generator(const SynthConfig& config) : config_(config), rng_(config.seed) {}

    SynthCorpus run() {
        draw_group_sizes();
        make_parties();
        make_core();
        make_clusters();
        make_groups();
        fill_report_budget();
        make_evidence();
        return finish();
    }

private:
    using Index = std::uint32_t;

    std::size_t uniform(std::size_t lo, std::size_t hi) {  // inclusive
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform(0, v.size() - 1)];
    }
    double lognormal(double median, double sigma) {
        return std::round(std::lognormal_distribution<double>(std::log(median), sigma)(rng_) * 100.0) / 100.0;
    }
    std::int64_t random_time() { return kYearStart + static_cast<std::int64_t>(uniform(0, kYearDays * kDay - 1)); }

    std::string_view random_country() {
        double r = real(0.0, 1.0);
        for (const auto& c : kCountries) {
            if ((r -= c.weight) < 0.0) return c.code;
        }
        return kCountries.front().code;
    }
    std::string_view foreign_country() { return kCountries[uniform(1, kCountries.size() - 1)].code; }

    void draw_group_sizes() {
        std::size_t total = 0;
        for (std::size_t g = 0; g < config_.n_injected_groups; ++g) {
            group_sizes_.push_back(uniform(config_.min_group_size, config_.max_group_size));
            total += group_sizes_.back();
        }
        if (2 * total > config_.n_parties) {
            throw std::invalid_argument("synth: injected groups need " + std::to_string(total) +
                                        " parties, more than half of n_parties");
        }
        group_total_ = total;
    }

    void make_parties() {
        const std::size_t n = config_.n_parties;
        std::vector<std::size_t> numbers(n);
        std::iota(numbers.begin(), numbers.end(), std::size_t{1});
        std::shuffle(numbers.begin(), numbers.end(), rng_);
        parties_.resize(n);
        role_.resize(n);
        reports_of_.resize(n);
        neighbours_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            PartyRecord& p = parties_[i];
            p.id = padded('P', numbers[i], 7);
            p.country = std::string(random_country());
            p.party_kind = chance(0.2) ? PartyKind::business : PartyKind::individual;
            if (p.party_kind == PartyKind::individual && chance(0.7)) {
                p.age = static_cast<int>(std::clamp(std::normal_distribution<double>(42.0, 14.0)(rng_), 18.0, 90.0));
            }
        }

        const std::size_t background = n - group_total_;
        const auto giant =
            static_cast<std::size_t>(std::llround(config_.core_fraction * static_cast<double>(n)));
        std::size_t core = giant > group_total_ ? giant - group_total_ : 0;
        core = std::clamp<std::size_t>(core, std::min<std::size_t>(3, background), background);
        Index next = 0;
        for (std::size_t g = 0; g < group_sizes_.size(); ++g) {
            std::vector<Index> members(group_sizes_[g]);
            for (auto& m : members) role_[m = next++] = Role::group;
            group_members_.push_back(std::move(members));
        }
        for (std::size_t i = 0; i < core; ++i) {
            core_.push_back(next);
            role_[next++] = Role::core;
        }
        for (; next < n; ++next) {
            cluster_parties_.push_back(next);
            role_[next] = Role::cluster;
        }
    }

    std::size_t add_report(Channel channel, Index from, Index to, double amount, std::int64_t time,
                           bool background = true) {
        ReportRecord r;
        r.channel = channel;
        r.senders = {parties_[from].id};
        r.receivers = {parties_[to].id};
        r.amount = amount;
        r.currency = std::string(channel == Channel::cash_deposit ? "AUD" : currency_of(parties_[to].country));
        r.timestamp = time;
        reports_.push_back(std::move(r));
        const std::size_t id = reports_.size() - 1;
        reports_of_[from].push_back(static_cast<Index>(id));
        if (to != from) {
            reports_of_[to].push_back(static_cast<Index>(id));
            neighbours_[from].push_back(to);
            neighbours_[to].push_back(from);
        }
        if (background) background_links_.push_back({channel, from, to});
        return id;
    }

    void background_transfer(Index a, Index b) {
        if (chance(0.5)) std::swap(a, b);
        add_report(Channel::international_transfer, a, b, lognormal(3000.0, 1.2), random_time());
    }
    void background_deposit(Index depositor, Index holder) {
        add_report(Channel::cash_deposit, depositor, holder, lognormal(15000.0, 0.5), random_time());
    }

    // Preferential attachment: each newcomer links to one or two parties
    // drawn proportionally to degree + 1.
    void make_core() {
        if (core_.empty()) return;
        std::vector<Index> pool;
        const std::size_t seedlings = std::min<std::size_t>(3, core_.size());
        for (std::size_t i = 0; i < seedlings; ++i) {
            pool.push_back(core_[i]);
            for (std::size_t j = 0; j < i; ++j) {
                background_transfer(core_[j], core_[i]);
                pool.push_back(core_[i]);
                pool.push_back(core_[j]);
            }
        }
        for (std::size_t i = seedlings; i < core_.size(); ++i) {
            const Index u = core_[i];
            const std::size_t m = chance(0.5) ? 1 : 2;
            Index first = u;
            for (std::size_t e = 0; e < m; ++e) {
                Index v = pick(pool);
                if (v == first) continue;
                first = v;
                background_transfer(u, v);
                pool.push_back(v);
                pool.push_back(u);
            }
            pool.push_back(u);
        }
    }

    // Small components: singletons deposit cash into their own account, larger
    // clusters are random trees of deposits and transfers.
    void make_clusters() {
        const std::size_t count = cluster_parties_.size();
        if (count == 0) return;
        const auto target_components = static_cast<std::size_t>(
            std::llround(config_.component_fraction * static_cast<double>(config_.n_parties)));
        const std::size_t k = std::clamp<std::size_t>(target_components > 1 ? target_components - 1 : 1, 1, count);
        std::vector<std::vector<Index>> clusters(k);
        for (std::size_t i = 0; i < k; ++i) clusters[i].push_back(cluster_parties_[i]);
        for (std::size_t i = k; i < count; ++i) clusters[uniform(0, k - 1)].push_back(cluster_parties_[i]);

        for (auto& cluster : clusters) {
            if (cluster.size() == 1) {
                const std::size_t deposits = uniform(1, 3);
                for (std::size_t d = 0; d < deposits; ++d) background_deposit(cluster[0], cluster[0]);
                continue;
            }
            for (std::size_t j = 1; j < cluster.size(); ++j) {
                const Index other = cluster[uniform(0, j - 1)];
                if (chance(0.6)) {
                    background_deposit(cluster[j], other);
                } else {
                    background_transfer(cluster[j], other);
                }
            }
            multi_clusters_.push_back(cluster);
        }
    }

    void make_groups() {
        for (std::size_t g = 0; g < group_members_.size(); ++g) {
            const auto& members = group_members_[g];
            const std::size_t s = members.size();
            const std::size_t n_int = std::max<std::size_t>(2, s / 4);
            const std::size_t n_ben = std::max<std::size_t>(1, s / 5);
            std::vector<Index> inter(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_int));
            std::vector<Index> ben(members.begin() + static_cast<std::ptrdiff_t>(n_int),
                                   members.begin() + static_cast<std::ptrdiff_t>(n_int + n_ben));
            std::vector<Index> mules(members.begin() + static_cast<std::ptrdiff_t>(n_int + n_ben), members.end());

            for (Index m : mules) {
                parties_[m].country = "AU";
                parties_[m].party_kind = PartyKind::individual;
            }
            parties_[inter[0]].country = "AU";
            parties_[inter[1]].country = std::string(foreign_country());
            for (std::size_t i = 2; i < inter.size(); ++i) {
                parties_[inter[i]].country = std::string(chance(0.5) ? foreign_country() : "AU");
            }
            for (Index b : ben) {
                if (chance(0.5)) parties_[b].country = "AU";
            }

            InjectedGroup record;
            std::vector<std::size_t> produced;
            const auto layering_start = kYearStart + static_cast<std::int64_t>(uniform(30, 320)) * kDay;

            // Placement: sub-threshold cash deposits spread over three weeks.
            for (Index m : mules) {
                const std::size_t deposits = uniform(2, 5);
                for (std::size_t d = 0; d < deposits; ++d) {
                    const auto t = layering_start - static_cast<std::int64_t>(uniform(1, 21 * kDay));
                    produced.push_back(add_report(Channel::cash_deposit, m, pick(inter),
                                                  10.0 * static_cast<double>(uniform(700, 990)), t, false));
                }
            }
            // Layering: dense transfers among intermediaries within 7 days; the
            // first intermediary deals with every other one directly.
            auto layer_time = [&] { return layering_start + static_cast<std::int64_t>(uniform(0, 7 * kDay - 1)); };
            for (std::size_t i = 1; i < inter.size(); ++i) {
                Index a = inter[0];
                Index b = inter[i];
                if (chance(0.5)) std::swap(a, b);
                produced.push_back(add_report(Channel::international_transfer, a, b, lognormal(45000.0, 0.35),
                                              layer_time(), false));
            }
            const std::size_t extra = 3 * n_int + uniform(0, 3 * n_int);
            for (std::size_t e = 0; e < extra; ++e) {
                const std::size_t a = uniform(0, n_int - 1);
                std::size_t b = uniform(0, n_int - 2);
                if (b >= a) ++b;
                produced.push_back(add_report(Channel::international_transfer, inter[a], inter[b],
                                              lognormal(45000.0, 0.35), layer_time(), false));
            }
            // Integration: consolidation towards beneficiaries after layering.
            for (Index b : ben) {
                const std::size_t transfers = uniform(1, 3);
                for (std::size_t t = 0; t < transfers; ++t) {
                    const auto when = layering_start + 7 * kDay + static_cast<std::int64_t>(uniform(0, 21 * kDay));
                    produced.push_back(add_report(Channel::international_transfer, pick(inter), b,
                                                  lognormal(60000.0, 0.4), when, false));
                }
            }
            // Ordinary activity ties every member into the wider network.
            for (Index m : members) {
                const std::size_t links = uniform(1, 2);
                for (std::size_t l = 0; l < links && !core_.empty(); ++l) {
                    const Index other = pick(core_);
                    if (chance(0.5)) {
                        background_transfer(m, other);
                    } else {
                        background_deposit(m, other);
                    }
                }
            }

            for (std::size_t i = 0; i < config_.tagged_per_group && i < inter.size(); ++i) {
                parties_[inter[i]].tagged_suspicious = true;
                record.tagged.push_back(parties_[inter[i]].id);
            }
            for (Index m : mules) record.mules.push_back(parties_[m].id);
            for (Index i : inter) record.intermediaries.push_back(parties_[i].id);
            for (Index b : ben) record.beneficiaries.push_back(parties_[b].id);
            group_reports_.push_back(std::move(produced));
            groups_.push_back(std::move(record));
            group_roles_.push_back({std::move(mules), std::move(inter), std::move(ben)});
        }
    }

    // Repeat existing background relationships until the report budget is met.
    void fill_report_budget() {
        const std::size_t target = config_.n_reports != 0 ? config_.n_reports : config_.n_parties * 3 / 2;
        const std::vector<Link> links = background_links_;
        while (reports_.size() < target && !links.empty()) {
            const Link& l = pick(links);
            if (l.channel == Channel::cash_deposit) {
                background_deposit(l.from, l.to);
            } else {
                background_transfer(l.from, l.to);
            }
        }
    }

    void associate(Index party, const EvidenceKey& key) {
        const auto& own = reports_of_[party];
        auto& r = reports_[pick(own)];
        r.evidence_associations.push_back({parties_[party].id, key});
        ++associations_;
    }

    EvidenceKey new_key(EvidenceKind kind) {
        static constexpr std::array<char, 3> prefix{'A', 'G', 'L'};
        return {kind, padded(prefix[static_cast<std::size_t>(kind)], ++key_counter_, 8)};
    }

    bool note_pair(Index a, Index b) {
        if (a == b) return false;
        return pairs_.insert({std::min(a, b), std::max(a, b)}).second;
    }

    void make_evidence() {
        // Mules of a group share accounts pairwise along a chain.
        for (const auto& roles : group_roles_) {
            const auto& mules = roles[0];
            for (std::size_t i = 0; i + 1 < mules.size(); ++i) {
                const EvidenceKey key = new_key(EvidenceKind::shared_account);
                associate(mules[i], key);
                associate(mules[i + 1], key);
                note_pair(mules[i], mules[i + 1]);
            }
        }

        std::size_t edges = 0;
        for (const auto& r : reports_) edges += r.senders.size() * r.receivers.size();
        const auto target = static_cast<std::size_t>(
            std::llround(config_.supplementary_ratio * static_cast<double>(edges)));
        std::size_t attempts = 0;
        while (pairs_.size() < target && attempts++ < 20 * target + 100) {
            std::vector<Index> holders;
            const bool in_core = multi_clusters_.empty() || (!core_.empty() && chance(0.75));
            if (in_core) {
                if (core_.size() < 2) break;
                const Index anchor = pick(core_);
                holders.push_back(anchor);
                const std::size_t extra = chance(0.15) ? 2 : 1;
                for (std::size_t e = 0; e < extra; ++e) {
                    const auto& nb = neighbours_[anchor];
                    Index other = !nb.empty() && chance(0.7) ? pick(nb) : pick(core_);
                    if (role_[other] != Role::core) other = pick(core_);
                    holders.push_back(other);
                }
            } else {
                const auto& cluster = pick(multi_clusters_);
                holders.push_back(pick(cluster));
                holders.push_back(pick(cluster));
                if (cluster.size() > 2 && chance(0.15)) holders.push_back(pick(cluster));
            }
            std::sort(holders.begin(), holders.end());
            holders.erase(std::unique(holders.begin(), holders.end()), holders.end());
            if (holders.size() < 2) continue;

            const double r = real(0.0, 1.0);
            const EvidenceKind kind = r < 0.5   ? EvidenceKind::shared_account
                                      : r < 0.8 ? EvidenceKind::shared_agent
                                                : EvidenceKind::shared_geolocation;
            const EvidenceKey key = new_key(kind);
            for (Index h : holders) associate(h, key);
            for (std::size_t i = 0; i < holders.size(); ++i) {
                for (std::size_t j = i + 1; j < holders.size(); ++j) note_pair(holders[i], holders[j]);
            }
        }
    }

    SynthCorpus finish() {
        std::vector<std::size_t> order(reports_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return reports_[a].timestamp < reports_[b].timestamp;
        });
        std::vector<std::size_t> position(reports_.size());
        SynthCorpus corpus;
        corpus.reports.reserve(reports_.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            position[order[i]] = i;
            ReportRecord r = std::move(reports_[order[i]]);
            r.report_id = padded('R', i + 1, 8);
            corpus.tally.transaction_edges += r.senders.size() * r.receivers.size();
            for (const auto& s : r.senders) {
                for (const auto& d : r.receivers) corpus.tally.self_loops += static_cast<std::size_t>(s == d);
            }
            corpus.reports.push_back(std::move(r));
        }
        corpus.tally.reports = corpus.reports.size();
        corpus.tally.evidence_associations = associations_;

        for (std::size_t g = 0; g < groups_.size(); ++g) {
            std::vector<std::size_t> ids;
            for (std::size_t r : group_reports_[g]) ids.push_back(position[r]);
            std::sort(ids.begin(), ids.end());
            for (std::size_t i : ids) groups_[g].report_ids.push_back(corpus.reports[i].report_id);
        }
        corpus.truth.groups = std::move(groups_);
        corpus.parties = std::move(parties_);
        std::sort(corpus.parties.begin(), corpus.parties.end(),
                  [](const PartyRecord& a, const PartyRecord& b) { return a.id < b.id; });
        return corpus;
    }

    struct Link {
        Channel channel;
        Index from;
        Index to;
    };

    const SynthConfig& config_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> group_sizes_;
    std::size_t group_total_ = 0;

    std::vector<PartyRecord> parties_;
    std::vector<Role> role_;
    std::vector<Index> core_;
    std::vector<Index> cluster_parties_;
    std::vector<std::vector<Index>> multi_clusters_;
    std::vector<std::vector<Index>> group_members_;
    std::vector<std::array<std::vector<Index>, 3>> group_roles_;  // mules, intermediaries, beneficiaries

    std::vector<ReportRecord> reports_;
    std::vector<std::vector<Index>> reports_of_;
    std::vector<std::vector<Index>> neighbours_;
    std::vector<Link> background_links_;
    std::vector<InjectedGroup> groups_;
    std::vector<std::vector<std::size_t>> group_reports_;

    std::set<std::pair<Index, Index>> pairs_;
    std::size_t key_counter_ = 0;
    std::size_t associations_ = 0;
};

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_array()) {
        throw FormatError(std::string("ground truth: missing array '") + field + "'");
    }
    return j.at(field).get<std::vector<std::string>>();
}

}  // namespace

void SynthConfig::validate() const {
    if (n_parties == 0) throw std::invalid_argument("SynthConfig: n_parties must be positive");
    if (!(component_fraction > 0.0 && component_fraction < 1.0)) {
        throw std::invalid_argument("SynthConfig: component fraction must lie in (0, 1)");
    }
    if (!(supplementary_ratio > 0.0 && supplementary_ratio < 1.0)) {
        throw std::invalid_argument("SynthConfig: supplementary ratio must lie in (0, 1)");
    }
    if (!(core_fraction > 0.0 && core_fraction < 1.0)) {
        throw std::invalid_argument("SynthConfig: core fraction must lie in (0, 1)");
    }
    if (min_group_size < 5 || max_group_size < min_group_size) {
        throw std::invalid_argument("SynthConfig: group sizes need 5 <= min <= max");
    }
    if (n_injected_groups > 0 && min_group_size > n_parties) {
        throw std::invalid_argument("SynthConfig: group size exceeds n_parties");
    }
    if (tagged_per_group == 0) throw std::invalid_argument("SynthConfig: tagged_per_group must be positive");
}

std::vector<std::string> InjectedGroup::members() const {
    std::vector<std::string> out = mules;
    out.insert(out.end(), intermediaries.begin(), intermediaries.end());
    out.insert(out.end(), beneficiaries.begin(), beneficiaries.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> GroundTruth::tagged_parties() const {
    std::vector<std::string> out;
    for (const auto& g : groups) out.insert(out.end(), g.tagged.begin(), g.tagged.end());
    std::sort(out.begin(), out.end());
    return out;
}

SynthCorpus generate(const SynthConfig& config) {
    config.validate();
    return Generator(config).run();
}

void write_corpus(std::ostream& out, const SynthCorpus& corpus) {
    for (const auto& p : corpus.parties) out << to_json_line(p) << '\n';
    for (const auto& r : corpus.reports) out << to_json_line(r) << '\n';
}

void write_corpus(const std::filesystem::path& path, const SynthCorpus& corpus) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_corpus(out, corpus);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
    for (std::size_t g = 0; g < truth.groups.size(); ++g) {
        const auto& group = truth.groups[g];
        json j{{"group", g},
               {"members", group.members()},
               {"mules", group.mules},
               {"intermediaries", group.intermediaries},
               {"beneficiaries", group.beneficiaries},
               {"tagged", group.tagged},
               {"report_ids", group.report_ids}};
        out << j.dump() << '\n';
    }
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_ground_truth(out, truth);
}

GroundTruth read_ground_truth(std::istream& in) {
    GroundTruth truth;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(std::string("ground truth: ") + e.what());
        }
        InjectedGroup g;
        g.mules = string_list(j, "mules");
        g.intermediaries = string_list(j, "intermediaries");
        g.beneficiaries = string_list(j, "beneficiaries");
        g.tagged = string_list(j, "tagged");
        g.report_ids = string_list(j, "report_ids");
        truth.groups.push_back(std::move(g));
    }
    return truth;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    return read_ground_truth(in);
}

}  // namespace laundergraph
