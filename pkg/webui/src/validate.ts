/**
 * Client-side mirror of the server's question validation, so the admin
 * form can flag defects inline before anything is sent. The server remains
 * the authority; this only saves a round trip.
 */

export interface QuestionDraft {
  id: string;
  category: string;
  text: string;
  choices: string[];
  correctIndex: number;
}

export function questionDefects(q: QuestionDraft): string[] {
  const defects: string[] = [];
  if (!q.id.trim()) {
    defects.push("empty id");
  }
  if (!q.category.trim()) {
    defects.push("empty category");
  }
  if (!q.text.trim()) {
    defects.push("empty question text");
  }
  if (q.choices.length !== 4) {
    defects.push(`choice count != 4 (got ${q.choices.length})`);
  }
  const trimmed = q.choices.map((c) => c.trim());
  trimmed.forEach((c, i) => {
    if (!c) {
      defects.push(`blank choice at position ${i}`);
    }
  });
  if (new Set(trimmed).size !== trimmed.length) {
    defects.push("duplicate choices");
  }
  if (q.correctIndex < 0 || q.correctIndex > 3 || q.correctIndex >= q.choices.length) {
    defects.push(`correct index ${q.correctIndex} out of range`);
  }
  return defects;
}
