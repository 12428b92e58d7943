// DOM layer: build the skeleton once, then patch it from each view
// model. All interaction goes through the store.

import { colorFor, gridRange } from './heatmap.js';
import type { Store } from './store.js';
import type { StrategyTag } from './types.js';
import { STRATEGY_TAGS } from './types.js';
import { viewModel, type ViewModel } from './viewmodel.js';

const HALF_PI = Math.PI / 2;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cardNode(rank: string, slot: number): HTMLElement {
  const card = el('div', 'card', rank);
  card.title = `deck slot ${slot}`;
  return card;
}

export function buildApp(root: HTMLElement, store: Store): void {
  root.textContent = '';

  const banner = el('div', 'banner hidden');
  const bannerText = el('span');
  const retryBtn = el('button', '', 'retry');
  retryBtn.addEventListener('click', () => void store.retry());
  banner.append(bannerText, retryBtn);

  const status = el('div', 'status');
  const bankroll = el('span', 'bankroll', 'bankroll 0');
  const phase = el('span', 'phase');
  const badge = el('span', 'badge hidden');
  status.append(bankroll, phase, badge);

  const table = el('div', 'table');
  const dealerRow = el('div', 'hand');
  const dealerLabel = el('span', 'label', 'dealer');
  const dealerCards = el('div', 'cards');
  dealerRow.append(dealerLabel, dealerCards);
  const playerRow = el('div', 'hand');
  const playerLabel = el('span', 'label', 'player');
  const playerCards = el('div', 'cards');
  playerRow.append(playerLabel, playerCards);
  const rowNote = el('div', 'row-note');
  table.append(dealerRow, playerRow, rowNote);

  const controls = el('div', 'controls');
  const dealBtn = el('button', 'deal', 'deal');
  dealBtn.addEventListener('click', () => void store.dealNext());
  controls.append(dealBtn);

  const strategyBtns = new Map<StrategyTag, HTMLButtonElement>();
  const tooltips = new Map<StrategyTag, HTMLElement>();
  for (const tag of STRATEGY_TAGS) {
    const wrap = el('div', 'strategy');
    const btn = el('button', 'strategy-btn', tag);
    btn.addEventListener('click', () => void store.choose(tag));
    const tip = el('div', 'tooltip');
    wrap.append(btn, tip);
    controls.append(wrap);
    strategyBtns.set(tag, btn);
    tooltips.set(tag, tip);
  }

  const hintsWrap = el('label', 'hints');
  const hintsBox = el('input') as HTMLInputElement;
  hintsBox.type = 'checkbox';
  hintsBox.checked = true;
  hintsBox.addEventListener('change', () => store.toggleHints());
  hintsWrap.append(hintsBox, document.createTextNode(' hints'));
  controls.append(hintsWrap);

  const sliders = el('div', 'sliders');
  const sliderInputs: Record<'gamma' | 'theta', HTMLInputElement> = {
    gamma: el('input') as HTMLInputElement,
    theta: el('input') as HTMLInputElement,
  };
  const sliderLabels: Record<'gamma' | 'theta', HTMLElement> = {
    gamma: el('span', 'angle-label'),
    theta: el('span', 'angle-label'),
  };
  for (const name of ['gamma', 'theta'] as const) {
    const rowEl = el('div', 'slider-row');
    const input = sliderInputs[name];
    input.type = 'range';
    input.min = '0';
    input.max = String(HALF_PI);
    input.step = String(Math.PI / 128);
    input.addEventListener('input', () => {
      const staged = store.getState().staged;
      const value = Number(input.value);
      if (name === 'gamma') store.stageParams(value, staged.theta);
      else store.stageParams(staged.gamma, value);
    });
    rowEl.append(el('span', 'label', name), input, sliderLabels[name]);
    sliders.append(rowEl);
  }
  const activeNote = el('div', 'active-note');
  sliders.append(activeNote);

  const spark = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  spark.setAttribute('class', 'spark');
  spark.setAttribute('viewBox', '0 0 200 40');
  spark.setAttribute('preserveAspectRatio', 'none');
  const sparkLine = document.createElementNS('http://www.w3.org/2000/svg', 'polyline');
  sparkLine.setAttribute('fill', 'none');
  sparkLine.setAttribute('stroke', '#7ad151');
  sparkLine.setAttribute('stroke-width', '2');
  spark.append(sparkLine);

  const heatmapPanel = el('div', 'heatmap');
  const heatmapNote = el('div', 'heatmap-note', 'expectation over (gamma, theta)');

  root.append(banner, status, table, controls, sliders, spark, heatmapPanel, heatmapNote);

  let renderedGrid: unknown = null;
  const cellNodes: HTMLElement[][] = [];

  function renderHeatmap(vm: ViewModel): void {
    if (!vm.heatmap) return;
    const { grid, marked } = vm.heatmap;
    if (renderedGrid !== grid) {
      renderedGrid = grid;
      heatmapPanel.textContent = '';
      cellNodes.length = 0;
      const { lo, hi } = gridRange(grid.values);
      // rows top-to-bottom are decreasing gamma so the origin sits lower-left
      for (let gi = grid.gammas.length - 1; gi >= 0; gi--) {
        const rowEl = el('div', 'heat-row');
        const rowCells: HTMLElement[] = [];
        for (let ti = 0; ti < grid.thetas.length; ti++) {
          const value = grid.values[gi]![ti]!;
          const cell = el('div', 'heat-cell');
          cell.style.background = colorFor(value, lo, hi);
          cell.title = `gamma=${grid.gammas[gi]!.toFixed(3)} theta=${grid.thetas[ti]!.toFixed(3)}`;
          const g = gi;
          const t = ti;
          cell.addEventListener('click', () => store.clickCell(g, t));
          rowEl.append(cell);
          rowCells.push(cell);
        }
        heatmapPanel.append(rowEl);
        cellNodes[gi] = rowCells;
      }
    }
    for (const row of cellNodes) {
      if (!row) continue;
      for (const cell of row) cell.classList.remove('marked');
    }
    if (marked) {
      cellNodes[marked.gi]?.[marked.ti]?.classList.add('marked');
    }
  }

  function update(vm: ViewModel): void {
    banner.classList.toggle('hidden', vm.banner === null);
    bannerText.textContent = vm.banner ?? '';

    bankroll.textContent = `bankroll ${vm.bankroll}`;
    phase.textContent = `${vm.phase} (${vm.handsPlayed} hands)`;
    badge.classList.toggle('hidden', vm.badge === null);
    badge.textContent = vm.badge ?? '';
    badge.classList.toggle('win', vm.badge?.startsWith('+') ?? false);
    badge.classList.toggle('loss', vm.badge?.startsWith('-') ?? false);

    dealerCards.textContent = '';
    if (vm.upcard) dealerCards.append(cardNode(vm.upcard.rank, vm.upcard.slot));
    playerCards.textContent = '';
    for (const card of vm.player) playerCards.append(cardNode(card.rank, card.slot));
    rowNote.textContent = vm.row === null ? '' : `initial class ${vm.row}`;

    dealBtn.disabled = vm.dealDisabled;
    for (const button of vm.buttons) {
      const btn = strategyBtns.get(button.tag)!;
      btn.disabled = button.disabled;
      btn.classList.toggle('hint', button.highlighted);
      btn.title = button.tooltip;
      tooltips.get(button.tag)!.textContent = button.tooltip;
    }

    sliderInputs.gamma.value = String(store.getState().staged.gamma);
    sliderInputs.theta.value = String(store.getState().staged.theta);
    sliderLabels.gamma.textContent = vm.stagedGammaLabel;
    sliderLabels.theta.textContent = vm.stagedThetaLabel;
    activeNote.textContent =
      vm.activeGammaLabel === null
        ? ''
        : `this hand: gamma=${vm.activeGammaLabel} theta=${vm.activeThetaLabel}` +
          ' (slider changes apply to the next deal)';

    const series = vm.series.length > 0 ? vm.series : [0];
    const lo = Math.min(...series, 0);
    const hi = Math.max(...series, 1);
    const points = series
      .map((v, i) => {
        const x = series.length === 1 ? 0 : (i / (series.length - 1)) * 200;
        const y = 38 - ((v - lo) / (hi - lo)) * 36;
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(' ');
    sparkLine.setAttribute('points', points);

    renderHeatmap(vm);
  }

  store.subscribe((state) => update(viewModel(state)));
  update(viewModel(store.getState()));
}
