namespace ceig { }  // placeholder
