int placeholder_test_optimizer;
