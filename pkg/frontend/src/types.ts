// Wire types for the session API. Field names match the JSON exactly.

export type Phase = 'awaiting_deal' | 'awaiting_strategy' | 'resolved';

export type StrategyTag = 'I' | 'X' | 'Y' | 'Z';

export const STRATEGY_TAGS: readonly StrategyTag[] = ['I', 'X', 'Y', 'Z'];

export interface CardView {
  slot: number;
  rank: string;
}

export interface PendingView {
  row: number;
  gamma: number;
  theta: number;
  player: CardView[];
  upcard: CardView;
}

export interface SessionView {
  id: string;
  gamma: number;
  theta: number;
  mode: string;
  seed: number | null;
  bankroll: number;
  phase: Phase;
  hands_played: number;
  pending: PendingView | null;
}

export interface StrategyEntry {
  strategy: StrategyTag;
  payoff: string | null;
  value: number;
  best: boolean;
}

export interface StrategiesResponse {
  row: number;
  strategies: StrategyEntry[];
  hint: StrategyTag[];
}

export interface HandRecord {
  row: number;
  player_slots: number[];
  up_slot: number;
  gamma: number;
  theta: number;
  strategy: string;
  mode: string;
  strategy_bits: number[];
  control_outcomes: number[];
  retries: number;
  player_final: number[];
  dealer_final: number[];
  player_total: number;
  dealer_total: number;
  payoff: number;
  seed: number | null;
}

export interface ActResponse {
  record: HandRecord;
  payoff: number;
  bankroll: number;
  phase: Phase;
}

export interface SweepResponse {
  gammas: number[];
  thetas: number[];
  values: number[][];
}
