// Mirrors of the server's scenario schema and result payloads.
export {};
