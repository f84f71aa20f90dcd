/**
 * Best/poor subject labeling for the admin skills view, mirroring the
 * server's analytics: argmax/argmin over per-category scores, three or
 * more tied categories summarized as "The rest of subjects", a full tie
 * rendered as "balanced".
 */

export const REST_LABEL = "The rest of subjects";
export const BALANCED_LABEL = "balanced";

// Join order for tied categories inside a label.
const LABEL_PRECEDENCE = ["Database", "Programming", "Networking", "Security", "IT"];

export interface SkillLabels {
  best: string;
  poor: string;
  uniform: boolean;
}

function label(categories: string[]): string {
  if (categories.length >= 3) {
    return REST_LABEL;
  }
  const rank = (c: string) => {
    const i = LABEL_PRECEDENCE.indexOf(c);
    return i === -1 ? LABEL_PRECEDENCE.length : i;
  };
  return [...categories]
    .sort((a, b) => rank(a) - rank(b) || a.localeCompare(b))
    .join(" and ");
}

export function skillLabels(scores: Record<string, number>): SkillLabels {
  const entries = Object.entries(scores);
  if (entries.length === 0) {
    throw new Error("at least one category required");
  }
  const values = entries.map(([, v]) => v);
  const hi = Math.max(...values);
  const lo = Math.min(...values);
  if (hi === lo) {
    return { best: BALANCED_LABEL, poor: BALANCED_LABEL, uniform: true };
  }
  const best = entries.filter(([, v]) => v === hi).map(([c]) => c);
  const poor = entries.filter(([, v]) => v === lo).map(([c]) => c);
  return { best: label(best), poor: label(poor), uniform: false };
}
