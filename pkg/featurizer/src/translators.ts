import { Translator } from './types.js';

export const DEFAULT_PIVOTS = ['de', 'ru'];

/**
 * Deterministic stand-in for a round-trip translation: rotates the word
 * order by a pivot-specific amount and normalizes whitespace, so each
 * pivot yields a distinct, reproducible paraphrase. Rejects empty input
 * the way a real translation pipeline rejects untranslatable text.
 */
export class MockTranslator implements Translator {
  readonly pivot: string;
  readonly name: string;
  private readonly shift: number;

  constructor(pivot: string, shift: number) {
    this.pivot = pivot;
    this.name = `mock-${pivot}`;
    this.shift = shift;
  }

  async paraphrase(text: string): Promise<string> {
    const words = text.split(/\s+/).filter((w) => w.length > 0);
    if (words.length === 0) {
      throw new Error(`nothing to translate via ${this.pivot}`);
    }
    const k = this.shift % words.length;
    return [...words.slice(k), ...words.slice(0, k)].join(' ');
  }
}

/**
 * Real back-translation through a pivot language using two Marian models
 * (optional @huggingface/transformers dependency, network required for the
 * first download).
 */
export async function loadMarianTranslator(pivot: string, device: string): Promise<Translator> {
  let transformers: any;
  try {
    transformers = await import('@huggingface/transformers');
  } catch {
    throw new Error(
      'marian translators need the optional @huggingface/transformers dependency; ' +
      'install it or use --translator mock'
    );
  }
  const { pipeline } = transformers;
  const forward = await pipeline('translation', `Helsinki-NLP/opus-mt-en-${pivot}`, { device });
  const backward = await pipeline('translation', `Helsinki-NLP/opus-mt-${pivot}-en`, { device });
  return {
    pivot,
    name: `marian-en-${pivot}-en`,
    async paraphrase(text: string): Promise<string> {
      if (!text.trim()) {
        throw new Error(`nothing to translate via ${pivot}`);
      }
      const there = await forward(text);
      const back = await backward(there[0].translation_text);
      return back[0].translation_text as string;
    },
  };
}

export async function makeTranslators(
  kind: string,
  pivots: string[],
  device: string,
): Promise<Translator[]> {
  if (kind === 'mock') {
    return pivots.map((pivot, index) => new MockTranslator(pivot, index + 1));
  }
  if (kind === 'marian') {
    return Promise.all(pivots.map((pivot) => loadMarianTranslator(pivot, device)));
  }
  throw new Error(`unknown translator ${kind}; expected 'mock' or 'marian'`);
}
