// Pure projection of store state into what the DOM shows. Every payoff
// string here is copied from an API response, never computed.

import { formatAngle, formatPayoff, payoffLabel } from './format.js';
import { markedCell, type MarkedCell } from './heatmap.js';
import type { State } from './store.js';
import type { CardView, StrategyTag, SweepResponse } from './types.js';
import { STRATEGY_TAGS } from './types.js';

export interface ButtonVM {
  tag: StrategyTag;
  tooltip: string;
  highlighted: boolean;
  disabled: boolean;
}

export interface HeatmapVM {
  grid: SweepResponse;
  marked: MarkedCell | null;
}

export interface ViewModel {
  phase: string;
  bankroll: number;
  series: number[];
  handsPlayed: number;
  row: number | null;
  player: CardView[];
  upcard: CardView | null;
  buttons: ButtonVM[];
  dealDisabled: boolean;
  badge: string | null;
  hintsOn: boolean;
  stagedGammaLabel: string;
  stagedThetaLabel: string;
  activeGammaLabel: string | null;
  activeThetaLabel: string | null;
  heatmap: HeatmapVM | null;
  banner: string | null;
  busy: boolean;
}

export function viewModel(state: State): ViewModel {
  const session = state.session;
  const pending = session?.pending ?? null;
  const awaiting = session?.phase === 'awaiting_strategy';

  const buttons: ButtonVM[] = STRATEGY_TAGS.map((tag) => {
    const entry = state.strategies?.strategies.find((e) => e.strategy === tag);
    return {
      tag,
      tooltip: entry ? payoffLabel(entry.payoff, entry.value) : '',
      highlighted: Boolean(awaiting && state.hintsOn && entry?.best),
      disabled: !awaiting || state.busy,
    };
  });

  let heatmap: HeatmapVM | null = null;
  if (state.grid) {
    heatmap = {
      grid: state.grid,
      marked: session ? markedCell(state.grid, session.gamma, session.theta) : null,
    };
  }

  return {
    phase: session?.phase ?? 'connecting',
    bankroll: session?.bankroll ?? 0,
    series: state.series,
    handsPlayed: session?.hands_played ?? 0,
    row: pending?.row ?? null,
    player: pending?.player ?? [],
    upcard: pending?.upcard ?? null,
    buttons,
    dealDisabled: !session || awaiting || state.busy,
    badge:
      session?.phase === 'resolved' && state.lastPayoff !== null
        ? formatPayoff(state.lastPayoff)
        : null,
    hintsOn: state.hintsOn,
    stagedGammaLabel: formatAngle(state.staged.gamma),
    stagedThetaLabel: formatAngle(state.staged.theta),
    activeGammaLabel: session ? formatAngle(session.gamma) : null,
    activeThetaLabel: session ? formatAngle(session.theta) : null,
    heatmap,
    banner: state.banner,
    busy: state.busy,
  };
}
