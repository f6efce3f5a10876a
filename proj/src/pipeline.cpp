namespace chc {}
