#include "nashlab/game_builders.hpp"

#include <algorithm>
#include <stdexcept>

namespace nashlab {

namespace {

class PokerBuilder {
 public:
  PokerBuilder(const std::string& name, const PokerRules& rules)
      : rules_(rules), builder_(name, rules.players) {
    builder_.set_zero_sum_expected(true);
    deck_ = rules.ranks * rules.suits;
    if (rules.players < 2 || rules.players > deck_)
      throw std::invalid_argument("poker: bad player count for deck size");
  }

  GameTree build() {
    NodeId root = builder_.add_chance(kNoNode);
    std::vector<int> deal;
    std::vector<bool> used(deck_, false);
    deal_cards(root, deal, used);
    int n_deals = 1;
    for (int i = 0; i < rules_.players; ++i) n_deals *= deck_ - i;
    builder_.set_chance_probs(root, std::vector<double>(n_deals, 1.0 / n_deals));
    return builder_.finalize();
  }

 private:
  int rank(int card) const { return card % rules_.ranks; }

  void deal_cards(NodeId root, std::vector<int>& deal, std::vector<bool>& used) {
    if (static_cast<int>(deal.size()) == rules_.players) {
      contrib_.assign(rules_.players, rules_.ante);
      round_contrib_.assign(rules_.players, 0);
      folded_.assign(rules_.players, false);
      deal_ = deal;
      board_ = -1;
      betting(root, 0, "", first_alive(0), 0, 0);
      return;
    }
    for (int c = 0; c < deck_; ++c) {
      if (used[c]) continue;
      used[c] = true;
      deal.push_back(c);
      deal_cards(root, deal, used);
      deal.pop_back();
      used[c] = false;
    }
  }

  int first_alive(int from) const {
    int p = from;
    while (folded_[p]) p = (p + 1) % rules_.players;
    return p;
  }

  int alive_count() const {
    int k = 0;
    for (bool f : folded_) k += !f;
    return k;
  }

  void betting(NodeId parent, int round, std::string hist, int actor, int bet, int count) {
    actor = first_alive(actor);
    if (count == alive_count()) {
      end_round(parent, round, hist);
      return;
    }
    std::string key = std::to_string(actor) + "|c" + std::to_string(deal_[actor]) +
                      "|b" + std::to_string(board_) + "|" + hist;
    std::vector<std::string> actions;
    bool can_fold = round_contrib_[actor] < bet;
    const auto& rr = rules_.rounds[round];
    bool can_raise = bet < rr.max_raises * rr.bet_size;
    if (can_fold) actions.push_back("f");
    if (can_raise) actions.push_back("r");
    actions.push_back("c");
    NodeId me = builder_.add_decision(parent, actor, key, actions);

    if (can_fold) {
      folded_[actor] = true;
      if (alive_count() == 1) {
        add_showdown(me);
      } else {
        betting(me, round, hist + "f", (actor + 1) % rules_.players, bet, count);
      }
      folded_[actor] = false;
    }
    if (can_raise) {
      int target = bet + rr.bet_size;
      int diff = target - round_contrib_[actor];
      round_contrib_[actor] = target;
      contrib_[actor] += diff;
      betting(me, round, hist + "r", (actor + 1) % rules_.players, target, 1);
      round_contrib_[actor] = target - diff;
      contrib_[actor] -= diff;
    }
    {
      int diff = bet - round_contrib_[actor];
      round_contrib_[actor] = bet;
      contrib_[actor] += diff;
      betting(me, round, hist + "c", (actor + 1) % rules_.players, bet, count + 1);
      round_contrib_[actor] = bet - diff;
      contrib_[actor] -= diff;
    }
  }

  void end_round(NodeId parent, int round, const std::string& hist) {
    bool last = alive_count() == 1 ||
                round + 1 == static_cast<int>(rules_.rounds.size());
    if (last) {
      add_showdown(parent);
      return;
    }
    std::vector<int> saved = round_contrib_;
    round_contrib_.assign(rules_.players, 0);
    if (rules_.board_card) {
      NodeId ch = builder_.add_chance(parent);
      std::vector<double> probs;
      for (int c = 0; c < deck_; ++c) {
        if (std::find(deal_.begin(), deal_.end(), c) != deal_.end()) continue;
        board_ = c;
        betting(ch, round + 1, hist + "/", 0, 0, 0);
        board_ = -1;
        probs.push_back(1.0);
      }
      for (double& p : probs) p = 1.0 / probs.size();
      builder_.set_chance_probs(ch, probs);
    } else {
      betting(parent, round + 1, hist + "/", 0, 0, 0);
    }
    round_contrib_ = saved;
  }

  void add_showdown(NodeId parent) {
    int pot = 0;
    for (int c : contrib_) pot += c;
    auto strength = [&](int p) {
      int r = rank(deal_[p]);
      return (board_ >= 0 && r == rank(board_)) ? r + 100 : r;
    };
    int best = -1;
    for (int p = 0; p < rules_.players; ++p)
      if (!folded_[p]) best = std::max(best, strength(p));
    int winners = 0;
    for (int p = 0; p < rules_.players; ++p)
      if (!folded_[p] && strength(p) == best) ++winners;
    std::vector<double> pay(rules_.players);
    for (int p = 0; p < rules_.players; ++p) {
      pay[p] = -contrib_[p];
      if (!folded_[p] && strength(p) == best)
        pay[p] += static_cast<double>(pot) / winners;
    }
    builder_.add_terminal(parent, pay);
  }

  PokerRules rules_;
  GameTreeBuilder builder_;
  int deck_;
  std::vector<int> deal_;
  int board_ = -1;
  std::vector<int> contrib_;        // total chips committed, antes included
  std::vector<int> round_contrib_;  // chips committed in the current round
  std::vector<bool> folded_;
};

}  // namespace

GameTree build_poker(const std::string& name, const PokerRules& rules) {
  return PokerBuilder(name, rules).build();
}

PokerRules kuhn_rules(int players) {
  if (players != 2 && players != 3)
    throw std::invalid_argument("kuhn: players must be 2 or 3");
  PokerRules r;
  r.players = players;
  r.ranks = players + 1;
  r.suits = 1;
  r.rounds = {{1, 1}};
  r.board_card = false;
  return r;
}

GameTree build_kuhn(int players) {
  return build_poker("kuhn-" + std::to_string(players), kuhn_rules(players));
}

PokerRules leduc_rules(int players) {
  if (players != 2 && players != 3)
    throw std::invalid_argument("leduc: players must be 2 or 3");
  PokerRules r;
  r.players = players;
  r.ranks = 3;
  r.suits = 2;
  r.rounds = {{2, 2}, {4, 2}};
  r.board_card = true;
  return r;
}

GameTree build_leduc(int players) {
  return build_poker("leduc-" + std::to_string(players), leduc_rules(players));
}

GameTree build_matrix_game(const std::string& name,
                           const std::vector<std::vector<double>>& row_payoff,
                           const std::vector<std::vector<double>>& col_payoff,
                           const std::vector<std::string>& row_actions,
                           const std::vector<std::string>& col_actions) {
  size_t nr = row_actions.size(), nc = col_actions.size();
  if (row_payoff.size() != nr || col_payoff.size() != nr)
    throw std::invalid_argument("matrix game: payoff row count mismatch");
  GameTreeBuilder b(name, 2);
  NodeId root = b.add_decision(kNoNode, 0, "row", row_actions);
  for (size_t i = 0; i < nr; ++i) {
    if (row_payoff[i].size() != nc || col_payoff[i].size() != nc)
      throw std::invalid_argument("matrix game: payoff column count mismatch");
    NodeId cn = b.add_decision(root, 1, "col", col_actions);
    for (size_t j = 0; j < nc; ++j)
      b.add_terminal(cn, {row_payoff[i][j], col_payoff[i][j]});
  }
  return b.finalize();
}

GameTree build_matching_pennies() {
  return build_matrix_game("matching-pennies", {{1, -1}, {-1, 1}},
                           {{-1, 1}, {1, -1}}, {"heads", "tails"},
                           {"heads", "tails"});
}

GameTree build_two_step_game() {
  GameTreeBuilder b("two-step", 2, 0.9);
  NodeId root = b.add_chance(kNoNode);
  b.set_chance_probs(root, {0.4, 0.6});
  // rewards[state][action] on player 0's first move, then on player 1's move,
  // terminal payoffs laid out per (state, a0, a1, a0')
  const double r0[2][2][2] = {{{0.5, -0.25}, {-1.0, 0.5}},
                              {{0.0, 1.0}, {0.75, -0.5}}};
  const double r1[2][2][2] = {{{-0.5, 1.0}, {0.25, 0.0}},
                              {{1.5, -1.0}, {-0.25, 0.75}}};
  const double term[2][2][2][2][2] = {
      {{{{2, -1}, {-1, 1}}, {{0, 0.5}, {1, -2}}},
       {{{-2, 2}, {0.5, 0}}, {{1, 1}, {-1, -0.5}}}},
      {{{{0, -2}, {2, 0.5}}, {{-0.5, 1}, {1.5, -1}}},
       {{{1, 0}, {-2, 1.5}}, {{0.5, -1}, {2, 2}}}}};
  for (int s = 0; s < 2; ++s) {
    NodeId p0 = b.add_decision(root, 0, "0|s" + std::to_string(s), {"a0", "a1"});
    for (int a = 0; a < 2; ++a) {
      NodeId p1 = b.add_decision(p0, 1, "1|a" + std::to_string(a), {"b0", "b1"});
      b.set_rewards(p1, {r0[s][a][0], r0[s][a][1]});
      for (int x = 0; x < 2; ++x) {
        std::string key = "0|s" + std::to_string(s) + ",a" + std::to_string(a) +
                          ",b" + std::to_string(x);
        NodeId p0b = b.add_decision(p1, 0, key, {"c0", "c1"});
        b.set_rewards(p0b, {r1[s][a][x], r1[s][x][a]});
        for (int y = 0; y < 2; ++y) {
          NodeId t = b.add_terminal(p0b, {term[s][a][x][y][0], term[s][a][x][y][1]});
          (void)t;
        }
      }
    }
  }
  return b.finalize();
}

GameTree build_game(const std::string& name) {
  if (name == "kuhn-2") return build_kuhn(2);
  if (name == "kuhn-3") return build_kuhn(3);
  if (name == "leduc-2") return build_leduc(2);
  if (name == "leduc-3") return build_leduc(3);
  if (name == "matching-pennies") return build_matching_pennies();
  if (name == "two-step") return build_two_step_game();
  throw std::invalid_argument("unknown game: " + name);
}

bool is_poker_game(const std::string& name) {
  return name.rfind("kuhn-", 0) == 0 || name.rfind("leduc-", 0) == 0;
}

}  // namespace nashlab
