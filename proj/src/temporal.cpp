#include "smtj/temporal.hpp"

namespace smtj {

EdgeEvent or_race(const std::vector<EdgeEvent>& edges) {
    if (edges.empty()) throw std::invalid_argument("or_race: empty input list");
    EdgeEvent first = EdgeEvent::never();
    for (const auto& e : edges)
        if (e.time_s < first.time_s) first = e;
    return first;
}

RaceOutcome one_hot_race(const std::vector<EdgeEvent>& edges) {
    if (edges.empty()) throw std::invalid_argument("one_hot_race: empty input list");
    RaceOutcome out;
    out.one_hot.assign(edges.size(), false);
    for (std::size_t j = 0; j < edges.size(); ++j) {
        if (!edges[j].is_never() &&
            (!out.has_winner || edges[j].time_s < out.winner_time.time_s)) {
            out.has_winner = true;
            out.winner = j;
            out.winner_time = edges[j];
        }
    }
    if (out.has_winner) out.one_hot[out.winner] = true;
    return out;
}

} // namespace smtj
