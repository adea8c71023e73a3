int placeholder_test_analysis;
