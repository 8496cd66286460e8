export interface AnnotationRecord {
  id: string;
  text: string;
  image: string;           // file name inside the images folder
  labels: string[];
}

export interface DatasetRecord {
  id: string;
  group: string;
  origin: 'original' | 'paraphrase';
  image_embedding: number[];
  text_embedding: number[];
  labels?: string[];
}

export interface FeaturizeJob {
  annotationsPath: string;
  imagesDir: string;
  taxonomyPath: string;
  outPath: string;
  manifestPath: string;
  encoder: string;         // 'hash' or 'clip:<model id>'
  pivots: string[];        // back-translation pivot languages
  batchSize: number;
  device: string;          // forwarded to the real encoder; ignored by 'hash'
  paraphrase: boolean;
  embeddingDim: number;    // hash encoder width; real encoders fix their own
}

export interface Manifest {
  encoder: string;
  translators: string[];
  embedding_dim: number;
  originals: number;
  paraphrases_written: number;
  paraphrases_skipped: number;
  records_total: number;
}

export interface Encoder {
  readonly name: string;
  readonly dim: number;
  embedImage(path: string): Promise<number[]>;
  embedText(text: string): Promise<number[]>;
}

export interface Translator {
  readonly pivot: string;
  readonly name: string;
  /** Back-translate via the pivot language; rejects on untranslatable input. */
  paraphrase(text: string): Promise<string>;
}
