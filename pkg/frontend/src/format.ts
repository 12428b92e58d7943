// Display formatting. Numbers shown to the player come from the API;
// these helpers only change their textual shape.

const HALF_PI = Math.PI / 2;

const PI_TOKENS = ['0', 'pi/8', 'pi/4', '3pi/8', 'pi/2'];

/** Radians as a pi token when on the pi/8 grid, else fixed decimals. */
export function formatAngle(radians: number): string {
  for (let k = 0; k < PI_TOKENS.length; k++) {
    if (Math.abs(radians - (k * Math.PI) / 8) < 1e-9) return PI_TOKENS[k]!;
  }
  return radians.toFixed(3);
}

/** Signed one-decimal percentage, the shape used for overall expectations. */
export function formatPercent(value: number): string {
  const pct = (value * 100).toFixed(1);
  return value > 0 ? `+${pct}%` : `${pct}%`;
}

/** Unit-bet outcome badge: +1, 0, -1. */
export function formatPayoff(payoff: number): string {
  return payoff > 0 ? `+${payoff}` : `${payoff}`;
}

/** Exact fraction when the API sent one, else its float rounded. */
export function payoffLabel(fraction: string | null, value: number): string {
  return fraction ?? value.toFixed(4);
}

export function clampAngle(radians: number): number {
  return Math.min(HALF_PI, Math.max(0, radians));
}
