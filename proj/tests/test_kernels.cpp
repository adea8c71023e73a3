int placeholder_test_kernels;
