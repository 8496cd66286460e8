import { createHash } from 'crypto';
import { readFileSync } from 'fs';
import { Encoder } from './types.js';

/**
 * Deterministic stand-in encoder: expands a SHA-256 of the content into a
 * unit-norm vector. It has no semantics; it exists so the pipeline, file
 * formats and paraphrase grouping can run and be tested without model
 * weights. Identical content always yields identical embeddings, and the
 * image and text streams share one width.
 */
export class HashEncoder implements Encoder {
  readonly name: string;
  readonly dim: number;

  constructor(dim = 64) {
    if (dim < 1) throw new Error(`embedding dim must be positive, got ${dim}`);
    this.dim = dim;
    this.name = `hash-${dim}`;
  }

  private expand(seedBytes: Buffer, stream: string): number[] {
    const values: number[] = [];
    let counter = 0;
    while (values.length < this.dim) {
      const digest = createHash('sha256')
        .update(stream)
        .update(seedBytes)
        .update(String(counter))
        .digest();
      for (let off = 0; off + 4 <= digest.length && values.length < this.dim; off += 4) {
        // map 32 bits to (-1, 1)
        values.push(digest.readInt32BE(off) / 2 ** 31);
      }
      counter += 1;
    }
    const norm = Math.sqrt(values.reduce((acc, v) => acc + v * v, 0)) || 1;
    return values.map((v) => v / norm);
  }

  async embedImage(path: string): Promise<number[]> {
    let bytes: Buffer;
    try {
      bytes = readFileSync(path);
    } catch (err) {
      throw new Error(`missing image ${path}: ${(err as Error).message}`);
    }
    return this.expand(bytes, 'image');
  }

  async embedText(text: string): Promise<number[]> {
    return this.expand(Buffer.from(text, 'utf-8'), 'text');
  }
}

/**
 * Real multimodal encoder backed by @huggingface/transformers (an optional
 * dependency: the checkpoint download needs network access). Image and
 * text towers project into one space, so both embeddings share a width.
 */
export async function loadClipEncoder(modelId: string, device: string): Promise<Encoder> {
  let transformers: any;
  try {
    transformers = await import('@huggingface/transformers');
  } catch {
    throw new Error(
      'the clip encoder needs the optional @huggingface/transformers dependency; ' +
      'install it or use --encoder hash'
    );
  }
  const { AutoTokenizer, AutoProcessor, CLIPTextModelWithProjection,
          CLIPVisionModelWithProjection, RawImage } = transformers;
  const tokenizer = await AutoTokenizer.from_pretrained(modelId);
  const processor = await AutoProcessor.from_pretrained(modelId);
  const textModel = await CLIPTextModelWithProjection.from_pretrained(modelId, { device });
  const visionModel = await CLIPVisionModelWithProjection.from_pretrained(modelId, { device });

  const toArray = (tensor: any): number[] => Array.from(tensor.data as Float32Array, Number);

  return {
    name: `clip:${modelId}`,
    dim: (textModel.config as any).projection_dim as number,
    async embedImage(path: string): Promise<number[]> {
      const image = await RawImage.read(path);
      const inputs = await processor(image);
      const { image_embeds } = await visionModel(inputs);
      return toArray(image_embeds);
    },
    async embedText(text: string): Promise<number[]> {
      const inputs = tokenizer([text], { padding: true, truncation: true });
      const { text_embeds } = await textModel(inputs);
      return toArray(text_embeds);
    },
  };
}

export async function makeEncoder(spec: string, dim: number, device: string): Promise<Encoder> {
  if (spec === 'hash') {
    return new HashEncoder(dim);
  }
  if (spec.startsWith('clip:')) {
    return loadClipEncoder(spec.slice('clip:'.length), device);
  }
  throw new Error(`unknown encoder ${spec}; expected 'hash' or 'clip:<model id>'`);
}
