#pragma once

#include <string>
#include <vector>

#include "nashlab/game_tree.hpp"

namespace nashlab {

struct PokerRules {
  struct Round {
    int bet_size;
    int max_raises;
  };
  int players = 2;
  int ranks = 3;
  int suits = 1;
  int ante = 1;
  std::vector<Round> rounds;
  bool board_card = false;  // deal one public card between rounds 1 and 2
};

GameTree build_poker(const std::string& name, const PokerRules& rules);

// Kuhn: 1 betting round, bet 1, at most one bet; 3-card deck for 2 players,
// 4-card deck for 3.
GameTree build_kuhn(int players);
PokerRules kuhn_rules(int players);

// Leduc: 6-card deck (3 ranks x 2 suits), two rounds with bets 2 then 4,
// at most two raises per round, one public card between rounds.
GameTree build_leduc(int players);
PokerRules leduc_rules(int players);

// One-shot simultaneous bimatrix game encoded with an information set that
// hides the row player's move from the column player.
GameTree build_matrix_game(const std::string& name,
                           const std::vector<std::vector<double>>& row_payoff,
                           const std::vector<std::vector<double>>& col_payoff,
                           const std::vector<std::string>& row_actions,
                           const std::vector<std::string>& col_actions);

GameTree build_matching_pennies();

// Two-player game with per-edge rewards and discount 0.9: chance state seen
// only by player 0, who acts twice; player 1 acts once in between seeing only
// player 0's first action.
GameTree build_two_step_game();

// Dispatcher for the names exposed by the CLI: kuhn-2, kuhn-3, leduc-2,
// leduc-3, matching-pennies, two-step.
GameTree build_game(const std::string& name);
bool is_poker_game(const std::string& name);

}  // namespace nashlab
