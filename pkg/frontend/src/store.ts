// Client state machine. Every transition round-trips to the API; the UI
// never computes a payoff. Guards: one request in flight at a time, and
// actions are ignored outside their phase, so double-clicks cannot
// double-act. Slider changes are staged and applied when the next hand
// is dealt; the hand keeps the angles it was dealt with.

import { api } from './api.js';
import type {
  SessionView,
  StrategiesResponse,
  StrategyTag,
  SweepResponse,
} from './types.js';

const HALF_PI = Math.PI / 2;

export interface StagedParams {
  gamma: number;
  theta: number;
}

export interface State {
  session: SessionView | null;
  strategies: StrategiesResponse | null;
  lastPayoff: number | null;
  series: number[];
  staged: StagedParams;
  grid: SweepResponse | null;
  hintsOn: boolean;
  busy: boolean;
  banner: string | null;
}

function initialState(): State {
  return {
    session: null,
    strategies: null,
    lastPayoff: null,
    series: [],
    staged: { gamma: HALF_PI, theta: HALF_PI },
    grid: null,
    hintsOn: true,
    busy: false,
    banner: null,
  };
}

type Listener = (state: State) => void;

function message(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export class Store {
  private state: State = initialState();
  private listeners = new Set<Listener>();
  private retryFn: (() => Promise<void>) | null = null;

  getState(): State {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private set(patch: Partial<State>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Serialize API work; on failure raise the banner and keep a retry. */
  private async run(label: string, fn: () => Promise<void>): Promise<void> {
    if (this.state.busy) return;
    this.set({ busy: true, banner: null });
    try {
      await fn();
      this.retryFn = null;
    } catch (err) {
      this.retryFn = () => this.run(label, fn);
      this.set({ banner: `${label} failed: ${message(err)}` });
    } finally {
      this.set({ busy: false });
    }
  }

  async retry(): Promise<void> {
    const fn = this.retryFn;
    if (fn && !this.state.busy) await fn();
  }

  async init(seed?: number | null, mode = 'faithful'): Promise<void> {
    await this.run('create session', async () => {
      const { gamma, theta } = this.state.staged;
      const session = await api.createSession({ gamma, theta, seed, mode });
      this.set({
        session,
        strategies: null,
        lastPayoff: null,
        series: [session.bankroll],
      });
    });
  }

  /** Deal the next hand, applying staged angles first if they changed. */
  async dealNext(): Promise<void> {
    const session = this.state.session;
    if (!session || session.phase === 'awaiting_strategy') return;
    await this.run('deal', async () => {
      let current = this.state.session!;
      const { gamma, theta } = this.state.staged;
      if (gamma !== current.gamma || theta !== current.theta) {
        current = await api.setParams(current.id, gamma, theta);
        this.set({ session: current });
      }
      const dealt = await api.deal(current.id);
      this.set({ session: dealt, strategies: null, lastPayoff: null });
      const strategies = await api.strategies(current.id);
      this.set({ strategies });
    });
  }

  /** Play the pending hand; ignored unless a hand awaits a strategy. */
  async choose(tag: StrategyTag): Promise<void> {
    const session = this.state.session;
    if (!session || session.phase !== 'awaiting_strategy') return;
    await this.run('act', async () => {
      const acted = await api.act(session.id, tag);
      const updated: SessionView = {
        ...session,
        phase: acted.phase,
        bankroll: acted.bankroll,
        hands_played: session.hands_played + 1,
        pending: null,
      };
      this.set({
        session: updated,
        lastPayoff: acted.payoff,
        series: [...this.state.series, acted.bankroll],
      });
    });
  }

  /** Stage slider angles for the next deal; no API call here. */
  stageParams(gamma: number, theta: number): void {
    this.set({ staged: { gamma, theta } });
  }

  toggleHints(): void {
    this.set({ hintsOn: !this.state.hintsOn });
  }

  /** Fetch the expectation surface; on failure keep the cached grid. */
  async loadGrid(resolution = 33): Promise<void> {
    await this.run('load surface', async () => {
      const grid = await api.sweep(resolution);
      this.set({ grid });
    });
  }

  /** Heatmap click: stage that cell's angles for the next deal. */
  clickCell(gi: number, ti: number): void {
    const grid = this.state.grid;
    if (!grid) return;
    const gamma = grid.gammas[gi];
    const theta = grid.thetas[ti];
    if (gamma === undefined || theta === undefined) return;
    this.stageParams(gamma, theta);
  }
}
