// JSON protocol shapes exchanged with the SimpliPy service.
export {};
