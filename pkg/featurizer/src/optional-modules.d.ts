// Optional at runtime: the real encoder/translator backends are only
// loaded when requested, and the package may be absent offline.
declare module '@huggingface/transformers';
